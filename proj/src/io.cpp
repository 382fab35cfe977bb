#include "phasekrylov/io.hpp"
#include "phasekrylov/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace pk {

namespace {

namespace ptree = boost::property_tree;
namespace fs = std::filesystem;

const std::map<std::string, std::set<std::string>> kKeys = {
    {"system", {"N", "L", "mass", "potential", "omega", "g", "coeffs"}},
    {"state", {"kind", "q0", "p0", "width", "index"}},
    {"run", {"t_max", "n_samples", "k_max", "tol", "lambda_max", "n_bases"}},
    {"operator", {"seed", "probe", "levels"}},
    {"outputs", {"directory", "formats"}},
};

double to_double(const std::string& key, const std::string& v) {
    double x = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    require(r.ec == std::errc() && r.ptr == v.data() + v.size(), "config", key + ": not a number: '" + v + "'");
    return x;
}

int to_int(const std::string& key, const std::string& v) {
    int x = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    require(r.ec == std::errc() && r.ptr == v.data() + v.size(), "config", key + ": not an integer: '" + v + "'");
    return x;
}

std::vector<std::string> words(const std::string& v) {
    std::istringstream in(v);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

std::string join(const std::vector<std::string>& ws) {
    std::string out;
    for (const auto& w : ws) out += (out.empty() ? "" : " ") + w;
    return out;
}

void write_meta(const fs::path& data, json meta) { write_json(fs::path(data.string() + ".meta.json"), meta); }

json grid_json(const PhaseGrid& pg) {
    return json{{"N", pg.N()}, {"L", pg.base.L}, {"mass", pg.base.mass}};
}

void ensure_parent(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

} // namespace

std::string format_double(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

ExperimentConfig parse_config(const std::string& text) {
    ptree::ptree tree;
    std::istringstream in(text);
    try {
        ptree::ini_parser::read_ini(in, tree);
    } catch (const ptree::ini_parser_error& e) {
        throw Error("config", std::string("unreadable config: ") + e.what());
    }
    ExperimentConfig cfg;
    for (const auto& [section, body] : tree) {
        const auto known = kKeys.find(section);
        require(known != kKeys.end() && body.data().empty(), "config", "unknown section [" + section + "]");
        for (const auto& [key, node] : body) {
            require(known->second.count(key) > 0, "config", "unknown key " + section + "." + key);
            const std::string v = node.get_value<std::string>();
            const std::string name = section + "." + key;
            if (section == "system") {
                SystemSpec& s = cfg.system;
                if (key == "N") s.N = to_int(name, v);
                else if (key == "L") s.L = to_double(name, v);
                else if (key == "mass") s.mass = to_double(name, v);
                else if (key == "potential") s.potential = v;
                else if (key == "omega") s.omega = to_double(name, v);
                else if (key == "g") s.g = to_double(name, v);
                else {
                    s.coeffs.clear();
                    for (const auto& w : words(v)) s.coeffs.push_back(to_double(name, w));
                }
            } else if (section == "state") {
                StateSpec& s = cfg.state;
                if (key == "kind") s.kind = v;
                else if (key == "q0") s.q0 = to_double(name, v);
                else if (key == "p0") s.p0 = to_double(name, v);
                else if (key == "width") s.width = to_double(name, v);
                else s.index = to_int(name, v);
            } else if (section == "run") {
                RunSpec& r = cfg.run;
                if (key == "t_max") r.t_max = to_double(name, v);
                else if (key == "n_samples") r.n_samples = to_int(name, v);
                else if (key == "k_max") r.k_max = to_int(name, v);
                else if (key == "tol") r.tol = to_double(name, v);
                else if (key == "lambda_max") r.lambda_max = to_int(name, v);
                else r.n_bases = to_int(name, v);
            } else if (section == "operator") {
                if (key == "seed") cfg.op.seed = v;
                else if (key == "probe") cfg.op.probe = v;
                else cfg.op.levels = to_int(name, v);
            } else {
                if (key == "directory") cfg.outputs.directory = v;
                else cfg.outputs.formats = words(v);
            }
        }
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    require(bool(in), "config", "cannot open config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string format_config(const ExperimentConfig& cfg) {
    std::vector<std::string> coeffs;
    for (double c : cfg.system.coeffs) coeffs.push_back(format_double(c));
    std::ostringstream o;
    o << "[system]\n"
      << "N = " << cfg.system.N << "\n"
      << "L = " << format_double(cfg.system.L) << "\n"
      << "mass = " << format_double(cfg.system.mass) << "\n"
      << "potential = " << cfg.system.potential << "\n"
      << "omega = " << format_double(cfg.system.omega) << "\n"
      << "g = " << format_double(cfg.system.g) << "\n";
    if (!coeffs.empty()) o << "coeffs = " << join(coeffs) << "\n";
    o << "\n[state]\n"
      << "kind = " << cfg.state.kind << "\n"
      << "q0 = " << format_double(cfg.state.q0) << "\n"
      << "p0 = " << format_double(cfg.state.p0) << "\n"
      << "width = " << format_double(cfg.state.width) << "\n"
      << "index = " << cfg.state.index << "\n"
      << "\n[run]\n"
      << "t_max = " << format_double(cfg.run.t_max) << "\n"
      << "n_samples = " << cfg.run.n_samples << "\n"
      << "k_max = " << cfg.run.k_max << "\n"
      << "tol = " << format_double(cfg.run.tol) << "\n"
      << "lambda_max = " << cfg.run.lambda_max << "\n"
      << "n_bases = " << cfg.run.n_bases << "\n"
      << "\n[operator]\n"
      << "seed = " << cfg.op.seed << "\n"
      << "probe = " << cfg.op.probe << "\n"
      << "levels = " << cfg.op.levels << "\n"
      << "\n[outputs]\n"
      << "directory = " << cfg.outputs.directory << "\n"
      << "formats = " << join(cfg.outputs.formats) << "\n";
    return o.str();
}

void validate(const ExperimentConfig& cfg) {
    const SystemSpec& s = cfg.system;
    require(is_power_of_two(s.N) && s.N >= 8, "config", "system.N must be a power of two >= 8");
    require(s.L > 0 && s.mass > 0, "config", "system.L and system.mass must be positive");
    static const std::set<std::string> potentials{"harmonic", "quartic", "polynomial", "free"};
    require(potentials.count(s.potential) > 0, "config", "unknown potential '" + s.potential + "'");
    if (s.potential == "harmonic" || s.potential == "quartic")
        require(s.omega > 0, "config", "system.omega must be positive");
    if (s.potential == "polynomial") require(!s.coeffs.empty(), "config", "polynomial potential needs system.coeffs");

    static const std::set<std::string> kinds{"coherent", "gaussian", "eigenstate"};
    require(kinds.count(cfg.state.kind) > 0, "config", "unknown state kind '" + cfg.state.kind + "'");
    require(cfg.state.width > 0, "config", "state.width must be positive");
    require(cfg.state.index >= 0 && cfg.state.index < s.N, "config", "state.index out of range");

    const RunSpec& r = cfg.run;
    require(r.t_max > 0 && r.n_samples > 0 && r.k_max > 0 && r.tol > 0, "config",
            "run.t_max, run.n_samples, run.k_max and run.tol must be positive");
    require(r.lambda_max > 0 && r.lambda_max % 2 == 1, "config", "run.lambda_max must be odd and positive");
    require(r.n_bases >= 0, "config", "run.n_bases must be non-negative");

    static const std::set<std::string> ops{"position", "momentum", "hamiltonian", "hamiltonian_squared"};
    require(ops.count(cfg.op.seed) > 0, "config", "unknown operator.seed '" + cfg.op.seed + "'");
    require(ops.count(cfg.op.probe) > 0, "config", "unknown operator.probe '" + cfg.op.probe + "'");
    require(cfg.op.levels >= 2 && cfg.op.levels <= s.N, "config", "operator.levels out of range");

    static const std::set<std::string> formats{"csv", "json", "bin"};
    for (const auto& f : cfg.outputs.formats)
        require(formats.count(f) > 0, "config", "unknown output format '" + f + "'");
}

Potential make_potential(const SystemSpec& s) {
    if (s.potential == "harmonic") return harmonic_potential(s.mass, s.omega);
    if (s.potential == "quartic") return quartic_potential(s.mass, s.omega, s.g);
    if (s.potential == "polynomial") return polynomial_potential(s.coeffs);
    return polynomial_potential({0.0});
}

Grid1D make_system_grid(const SystemSpec& s) { return make_grid(s.N, s.L, s.mass); }

StateVector make_initial_state(const StateSpec& st, const SystemSpec& sys, const SpectralDecomposition& spec) {
    if (st.kind == "eigenstate") return eigenstate(spec, st.index);
    if (st.kind == "gaussian") return gaussian_state(spec.grid, st.q0, st.p0, st.width);
    require(sys.potential == "harmonic", "config", "coherent states are defined on the harmonic potential");
    const double s = std::sqrt(sys.mass * sys.omega);
    require(std::abs(st.width * s - 1) < 1e-12, "config", "coherent state width must be 1/sqrt(mass omega)");
    const cplx alpha = cplx(s * st.q0, st.p0 / s) / std::sqrt(2.0);
    return from_energy_basis(spec, coherent_coefficients(spec, alpha, sys.mass, sys.omega));
}

OperatorMatrix named_operator(const std::string& name, const Grid1D& g, const OperatorMatrix& H) {
    if (name == "position") return position_operator(g);
    if (name == "momentum") return momentum_operator(g);
    if (name == "hamiltonian") return H;
    require(name == "hamiltonian_squared", "config", "unknown operator '" + name + "'");
    return make_operator(g, H.m * H.m);
}

void write_json(const fs::path& path, const json& j) {
    ensure_parent(path);
    std::ofstream out(path);
    require(bool(out), "io", "cannot write " + path.string());
    out << j.dump(2) << "\n";
}

void write_table_csv(const fs::path& path, const Table& t, const std::string& identity) {
    ensure_parent(path);
    std::ofstream out(path);
    require(bool(out), "io", "cannot write " + path.string());
    const bool labelled = !t.label_column.empty();
    require(!labelled || t.labels.size() == t.rows.size(), "io", "one label per table row");
    if (labelled) out << t.label_column << ",";
    for (size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
    out << "\n";
    for (size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        require(row.size() == t.columns.size(), "io", "table row width differs from the header");
        if (labelled) out << t.labels[r] << ",";
        for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
        out << "\n";
    }
    write_meta(path, json{{"identity", identity}, {"columns", t.columns}, {"rows", t.rows.size()}});
}

void write_table_json(const fs::path& path, const Table& t, const std::string& identity) {
    json cols = json::object();
    if (!t.label_column.empty()) cols[t.label_column] = t.labels;
    for (size_t c = 0; c < t.columns.size(); ++c) {
        json v = json::array();
        for (const auto& row : t.rows) v.push_back(row.at(c));
        cols[t.columns[c]] = v;
    }
    write_json(path, json{{"identity", identity}, {"columns", cols}});
    write_meta(path, json{{"identity", identity}, {"columns", t.columns}, {"rows", t.rows.size()}});
}

json field_metadata(const PhaseField& f, const std::string& identity) {
    json j = grid_json(f.grid);
    j["normalization"] = to_string(f.norm);
    j["axis_order"] = "q-major";
    j["planes"] = json::array({"real", "imag"});
    j["dtype"] = "float64";
    j["identity"] = identity;
    return j;
}

void write_field_bin(const fs::path& path, const PhaseField& f, const std::string& identity) {
    ensure_parent(path);
    std::ofstream out(path, std::ios::binary);
    require(bool(out), "io", "cannot write " + path.string());
    const int N = f.N();
    std::vector<double> plane(size_t(N) * N);
    for (int part = 0; part < 2; ++part) {
        for (int i = 0; i < N; ++i)
            for (int k = 0; k < N; ++k) {
                const cplx v = f.values(i, k);
                plane[size_t(i) * N + k] = part == 0 ? v.real() : v.imag();
            }
        out.write(reinterpret_cast<const char*>(plane.data()), std::streamsize(plane.size() * sizeof(double)));
    }
    write_meta(path, field_metadata(f, identity));
}

PhaseField read_field_bin(const fs::path& path) {
    std::ifstream meta_in(path.string() + ".meta.json");
    require(bool(meta_in), "io", "missing sidecar for " + path.string());
    const json meta = json::parse(meta_in);
    const Grid1D g = make_grid(meta.at("N").get<int>(), meta.at("L").get<double>(), meta.at("mass").get<double>());
    const Normalization n =
        meta.at("normalization").get<std::string>() == "wigner" ? Normalization::wigner : Normalization::symbol;
    PhaseField f = zero_field(make_phase_grid(g), n);
    const int N = g.N;
    std::ifstream in(path, std::ios::binary);
    std::vector<double> re(size_t(N) * N), im(size_t(N) * N);
    in.read(reinterpret_cast<char*>(re.data()), std::streamsize(re.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(im.data()), std::streamsize(im.size() * sizeof(double)));
    require(bool(in), "io", "truncated field file " + path.string());
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k) f.values(i, k) = cplx(re[size_t(i) * N + k], im[size_t(i) * N + k]);
    return f;
}

void write_double_field_bin(const fs::path& path, const DoublePhaseField& f, const std::string& identity) {
    ensure_parent(path);
    std::ofstream out(path, std::ios::binary);
    require(bool(out), "io", "cannot write " + path.string());
    std::vector<double> plane(f.values.size());
    for (int part = 0; part < 2; ++part) {
        for (size_t j = 0; j < f.values.size(); ++j) plane[j] = part == 0 ? f.values[j].real() : f.values[j].imag();
        out.write(reinterpret_cast<const char*>(plane.data()), std::streamsize(plane.size() * sizeof(double)));
    }
    json meta = grid_json(f.grid);
    meta["axes"] = json::array({"q_plus", "p_plus", "q_minus", "p_minus"});
    meta["axis_order"] = "q_plus-major";
    meta["planes"] = json::array({"real", "imag"});
    meta["dtype"] = "float64";
    meta["identity"] = identity;
    write_meta(path, meta);
}

Table field_slices(const PhaseField& f) {
    const int N = f.N(), o = N / 2;
    Table t{{"q", "W_p0_re", "W_p0_im", "p", "W_q0_re", "W_q0_im"}, {}};
    for (int j = 0; j < N; ++j) {
        const cplx a = f.values(j, o), b = f.values(o, j);
        t.rows.push_back({f.grid.q(j), a.real(), a.imag(), f.grid.p(j), b.real(), b.imag()});
    }
    return t;
}

Table double_field_centre_slice(const DoublePhaseField& f) {
    const int N = f.N(), o = N / 2;
    Table t{{"xi_q", "F_re", "F_im"}, {}};
    // x+ = xi/2, x- = -xi/2
    for (int j = -(o - 1); j <= o - 1; ++j) {
        const cplx v = f.at(o + j, o, o - j, o);
        t.rows.push_back({2 * j * f.grid.base.dx, v.real(), v.imag()});
    }
    return t;
}

Table double_field_chord_slice(const DoublePhaseField& f) {
    const int N = f.N(), o = N / 2;
    Table t{{"q", "F_re", "F_im"}, {}};
    for (int i = 0; i < N; ++i) {
        const cplx v = f.at(i, o, i, o);
        t.rows.push_back({f.grid.q(i), v.real(), v.imag()});
    }
    return t;
}

} // namespace pk
