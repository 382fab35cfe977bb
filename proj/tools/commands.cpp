#include "commands.hpp"

#include "phasekrylov/complexity.hpp"
#include "phasekrylov/dynamics.hpp"
#include "phasekrylov/error.hpp"
#include "phasekrylov/krylov.hpp"
#include "phasekrylov/moyal.hpp"
#include "phasekrylov/superphase.hpp"
#include "phasekrylov/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pk::cli {

namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

const char* kIdComplexity =
    "Krylov complexity C(t) = sum_n n |phi_n(t)|^2 against its phase-space form, the integral of W(t) times the "
    "spreading kernel 2 pi sum_n n W^K_nn";
const char* kIdLanczos = "Lanczos coefficients a_n, b_n of the Krylov chain";
const char* kIdSpreading =
    "spreading probabilities |phi_n(t)|^2 against their phase-space form 2 pi integral W^K_nn W(t)";
const char* kIdRates =
    "complexity rate dC/dt as the pairing of the spreading kernel with the classical Liouville term and each odd "
    "order quantum correction of the Moyal bracket, against a central difference of C(t)";
const char* kIdProbe =
    "cost of random orthonormal bases sharing the seed, minus the Krylov cost, minimised over the bases";
const char* kIdOperator =
    "operator Krylov complexity sum_n n |<<O_n|O(t)>>|^2 against the double phase-space pairing of the operator "
    "spreading kernel (2 pi)^2 sum_n n W^K_nn with the dual Wigner function of O(t)";
const char* kIdOtoc =
    "squared commutator <<[V,O(t)]|[V,O(t)]>> by the trace route and by the double phase-space route";
const char* kIdSuite = "invariant residuals of every module on a small instance";
const char* kIdWigner = "Wigner function W(q,p,t), the Weyl transform of |psi(t)><psi(t)| divided by 2 pi";

std::vector<double> sample_times(const RunSpec& r) {
    std::vector<double> t(r.n_samples);
    for (int j = 0; j < r.n_samples; ++j) t[j] = r.n_samples == 1 ? r.t_max : r.t_max * j / (r.n_samples - 1);
    return t;
}

struct Writer {
    fs::path dir;
    std::vector<std::string> formats;

    bool has(const std::string& f) const { return std::find(formats.begin(), formats.end(), f) != formats.end(); }

    void table(const std::string& stem, const Table& t, const std::string& identity) const {
        const bool csv = has("csv") || !has("json");
        if (csv) write_table_csv(dir / (stem + ".csv"), t, identity);
        if (has("json")) write_table_json(dir / (stem + ".json"), t, identity);
    }
};

Writer make_writer(const ExperimentConfig& cfg, const Options& opt) {
    Writer w{opt.out ? fs::path(*opt.out) : fs::path(cfg.outputs.directory), cfg.outputs.formats};
    if (opt.format) w.formats = {*opt.format};
    fs::create_directories(w.dir);
    return w;
}

void write_summary(const Writer& w, const std::string& command, const ExperimentConfig& cfg, json body) {
    json j{{"command", command}, {"config", format_config(cfg)}};
    for (auto& [k, v] : body.items()) j[k] = v;
    write_json(w.dir / "summary.json", j);
}

struct StateSide {
    Grid1D g;
    PhaseGrid pg;
    Potential V;
    OperatorMatrix H;
    SpectralDecomposition spec;
    StateVector psi0;
};

StateSide state_side(const ExperimentConfig& cfg) {
    StateSide s;
    s.g = make_system_grid(cfg.system);
    s.pg = make_phase_grid(s.g);
    s.V = make_potential(cfg.system);
    s.H = build_hamiltonian(s.g, s.V);
    s.spec = eigendecompose(s.H);
    s.psi0 = make_initial_state(cfg.state, cfg.system, s.spec);
    check_boundary(s.psi0, "initial state");
    return s;
}

PhaseField hamiltonian_symbol(const StateSide& s) {
    const Potential V = s.V;
    const double m = s.g.mass;
    return sample_field(s.pg, [V, m](double q, double p) { return cplx(0.5 * p * p / m + V.value(q)); });
}

double chain_complexity(const KrylovStateBasis& kb, const StateSide& s, double t) {
    return complexity_direct(amplitudes(kb, evolve_state(s.spec, s.psi0, t)));
}

Table lanczos_table(const std::vector<double>& a, const std::vector<double>& b) {
    Table t{{"n", "a_n", "b_n"}, {}};
    for (size_t n = 0; n < a.size(); ++n) t.rows.push_back({double(n), a[n], b[n]});
    return t;
}

struct OperatorSide {
    Grid1D g;
    OperatorMatrix H;
    OperatorMatrix Hb;
    SpectralDecomposition spec;
    Mat sector;
    int M = 6;

    OperatorMatrix squeeze(const OperatorMatrix& O) const { return compress(O, spec, M); }
    OperatorMatrix unit(const OperatorMatrix& O) const {
        OperatorMatrix c = squeeze(O);
        const double n = hs_norm(c);
        require(n > 0, "precondition", "operator vanishes on the retained levels");
        c.m /= n;
        return c;
    }
};

OperatorSide operator_side(const ExperimentConfig& cfg) {
    require(cfg.system.N <= kSuperopMaxN, "memory_guard",
            "operator-side commands need system.N <= " + std::to_string(kSuperopMaxN));
    OperatorSide s;
    s.g = make_system_grid(cfg.system);
    s.H = build_hamiltonian(s.g, make_potential(cfg.system));
    s.Hb = band_limit(s.H);
    s.spec = eigendecompose(s.Hb);
    s.M = cfg.op.levels;
    const Mat V = s.spec.eigenvectors.leftCols(s.M);
    s.sector = V * V.adjoint();
    return s;
}

// collects (name, residual, tolerance) rows for the identity suite
struct Suite {
    Table table{{"residual", "tolerance", "pass"}, {}, "check", {}};
    bool ok = true;

    void add(const std::string& name, double residual, double tol) {
        const bool pass = std::isfinite(residual) && residual <= tol;
        ok = ok && pass;
        table.labels.push_back(name);
        table.rows.push_back({residual, tol, pass ? 1.0 : 0.0});
    }
};

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

int state_complexity(const ExperimentConfig& cfg, const Options& opt) {
    const Writer w = make_writer(cfg, opt);
    const StateSide s = state_side(cfg);
    const KrylovStateBasis kb = lanczos_state(s.spec, s.psi0, cfg.run.k_max);
    const KrylovPhaseSet set = krylov_phase_set(kb);
    const PhaseField K = spreading_kernel(set);

    const std::vector<double> times = sample_times(cfg.run);
    Table trace{{"t", "C_direct", "C_phase", "abs_diff", "max_abs_diff"}, {}};
    Table spread{{"t", "n", "p_direct", "p_phase"}, {}};
    const int every = std::max(1, int(times.size()) / 4);
    double worst = 0.0;
    bool pass = true;
    for (size_t j = 0; j < times.size(); ++j) {
        const StateVector psi = evolve_state(s.spec, s.psi0, times[j]);
        const PhaseField W = wigner_of_state(psi);
        const ChainAmplitudes phi = amplitudes(kb, psi);
        const double cd = complexity_direct(phi), cp = complexity_phase(W, K);
        const double d = std::abs(cd - cp);
        worst = std::max(worst, d);
        pass = pass && d <= cfg.run.tol * (1 + cd);
        trace.rows.push_back({times[j], cd, cp, d, worst});
        if (j % every == 0 || j + 1 == times.size()) {
            const std::vector<double> p = krylov_probabilities_phase(set, W);
            for (int n = 0; n < kb.dim(); ++n) spread.rows.push_back({times[j], double(n), std::norm(phi.phi[n]), p[n]});
        }
    }
    w.table("complexity", trace, kIdComplexity);
    w.table("lanczos", lanczos_table(kb.a, kb.b), kIdLanczos);
    w.table("spreading", spread, kIdSpreading);

    json body{{"krylov_dimension", kb.dim()}, {"max_abs_diff", worst}, {"tol", cfg.run.tol}, {"pass", pass}};
    if (cfg.run.n_bases > 0 && kb.dim() > 1) {
        const MinimizationProbe mp = minimization_probe(kb, s.spec, s.psi0, cfg.run.n_bases, opt.seed, 0.5 / kb.b[1], 41);
        Table probe{{"t", "krylov_cost", "min_margin"}, {}};
        for (size_t j = 0; j < mp.times.size(); ++j) probe.rows.push_back({mp.times[j], mp.krylov_cost[j], mp.min_margin[j]});
        w.table("minimization_probe", probe, kIdProbe);
        body["probe"] = json{{"n_bases", mp.n_bases}, {"seed", opt.seed}, {"window_end", mp.window_end},
                             {"window_samples", mp.window_samples}};
    }
    write_summary(w, "state-complexity", cfg, body);
    return pass ? 0 : 1;
}

int rate_split(const ExperimentConfig& cfg, const Options& opt) {
    const Writer w = make_writer(cfg, opt);
    const StateSide s = state_side(cfg);
    const KrylovStateBasis kb = lanczos_state(s.spec, s.psi0, cfg.run.k_max);
    const PhaseField K = spreading_kernel(krylov_phase_set(kb));

    Table t{{"t", "rate_classical"}, {}};
    for (int l = 3; l <= cfg.run.lambda_max; l += 2) t.columns.push_back("rate_lambda_" + std::to_string(l));
    for (const char* c : {"rate_total", "fd_total", "abs_diff"}) t.columns.push_back(c);

    const double h = 1e-3;
    double worst = 0.0;
    for (double time : sample_times(cfg.run)) {
        const PhaseField W = wigner_of_state(evolve_state(s.spec, s.psi0, time));
        const RateSplit r = complexity_rate_split(K, liouville_split(W, s.V, cfg.run.lambda_max));
        std::vector<double> row{time, r.rate_classical};
        for (int l = 3; l <= cfg.run.lambda_max; l += 2) {
            const auto it = r.rate_quantum.find(l);
            row.push_back(it == r.rate_quantum.end() ? 0.0 : it->second);
        }
        const double fd = (chain_complexity(kb, s, time + h) - chain_complexity(kb, s, time - h)) / (2 * h);
        const double d = std::abs(r.total() - fd);
        worst = std::max(worst, d);
        row.insert(row.end(), {r.total(), fd, d});
        t.rows.push_back(row);
    }
    w.table("rates", t, kIdRates);
    const bool pass = worst <= cfg.run.tol;
    write_summary(w, "rate-split", cfg,
                  json{{"krylov_dimension", kb.dim()}, {"fd_step", h}, {"max_abs_diff", worst}, {"tol", cfg.run.tol},
                       {"pass", pass}});
    return pass ? 0 : 1;
}

int operator_complexity(const ExperimentConfig& cfg, const Options& opt) {
    const Writer w = make_writer(cfg, opt);
    const OperatorSide s = operator_side(cfg);
    const OperatorMatrix O0 = s.unit(named_operator(cfg.op.seed, s.g, s.Hb));
    const KrylovOperatorBasis basis = lanczos_operator(s.Hb, O0, cfg.run.k_max, kLanczosTol, s.sector);
    const OperatorKrylovPhaseSet set(basis);
    const DoublePhaseField K = operator_spreading_kernel(set);
    set.release();

    Table t{{"t", "C_direct", "C_phase", "C_centre", "abs_diff"}, {}};
    double worst = 0.0;
    for (double time : sample_times(cfg.run)) {
        const OperatorMatrix Ot = evolve_operator(s.spec, O0, time);
        const double cd = operator_complexity_direct(basis, Ot);
        const double cp = operator_complexity_phase(K, Ot);
        const double d = std::abs(cd - cp);
        worst = std::max(worst, d);
        t.rows.push_back({time, cd, cp, operator_complexity_reduced(basis, Ot), d});
    }
    w.table("operator_complexity", t, kIdOperator);
    w.table("lanczos", lanczos_table(basis.a, basis.b), kIdLanczos);
    const bool pass = worst <= cfg.run.tol;
    write_summary(w, "operator-complexity", cfg,
                  json{{"krylov_dimension", basis.dim()}, {"max_abs_diff", worst}, {"tol", cfg.run.tol}, {"pass", pass}});
    return pass ? 0 : 1;
}

int otoc(const ExperimentConfig& cfg, const Options& opt) {
    const Writer w = make_writer(cfg, opt);
    const OperatorSide s = operator_side(cfg);
    const OperatorMatrix V = s.squeeze(named_operator(cfg.op.probe, s.g, s.Hb));
    const OperatorMatrix O0 = s.unit(named_operator(cfg.op.seed, s.g, s.Hb));

    Table t{{"t", "otoc_trace", "otoc_phase", "rel_gap"}, {}};
    double worst = 0.0;
    bool pass = true;
    for (double time : sample_times(cfg.run)) {
        const OperatorMatrix Ot = evolve_operator(s.spec, O0, time);
        const double direct = otoc_direct(V, Ot), phase = otoc_phase(V, Ot);
        const double gap = std::abs(phase - direct);
        // both routes vanish when V and O(t) commute
        const double rel = direct > 1e-12 ? gap / direct : 0.0;
        pass = pass && gap <= cfg.run.tol * direct + 1e-10;
        worst = std::max(worst, rel);
        t.rows.push_back({time, direct, phase, rel});
    }
    w.table("otoc", t, kIdOtoc);
    write_summary(w, "otoc", cfg, json{{"max_rel_gap", worst}, {"tol", cfg.run.tol}, {"pass", pass}});
    return pass ? 0 : 1;
}

int identity_suite(const ExperimentConfig& cfg, const Options& opt) {
    const Writer w = make_writer(cfg, opt);
    Suite suite;
    const StateSide s = state_side(cfg);
    const int N = s.g.N;

    // quantum
    const Mat& E = s.spec.eigenvectors;
    const double hnorm = s.spec.eigenvalues.cwiseAbs().maxCoeff();
    suite.add("quantum.eigen_residual",
              max_abs(s.H.m * E - E * s.spec.eigenvalues.cast<cplx>().asDiagonal()) / hnorm, 1e-10);
    suite.add("quantum.unitary_evolution", std::abs(evolve_state(s.spec, s.psi0, 0.7).norm2() - 1), 1e-12);

    // krylov
    const int D = std::min(cfg.run.k_max, 8);
    const KrylovStateBasis kb = lanczos_state(s.spec, s.psi0, D);
    const Mat C = kb.coords();
    suite.add("krylov.orthonormality", max_abs(C.adjoint() * C - Mat::Identity(kb.dim(), kb.dim())), 1e-10);
    suite.add("krylov.tridiagonal", max_abs(C.adjoint() * s.H.m * C - tridiagonal(kb.a, kb.b)) / hnorm, 1e-9);

    // wigner
    const StateVector ground = eigenstate(s.spec, 0);
    const PhaseField W0 = wigner_of_state(ground);
    suite.add("wigner.normalization", std::abs(W0.integral() - 1.0), 1e-8);
    suite.add("wigner.real", W0.max_abs_imag(), 1e-9);
    {
        const std::vector<cplx> pw = momentum_wavefunction(ground, s.pg);
        double eq = 0, ep = 0;
        for (int i = 0; i < N; ++i) {
            eq = std::max(eq, std::abs(W0.values.row(i).sum().real() * s.pg.dp - std::norm(ground.amp(i))));
            ep = std::max(ep, std::abs(W0.values.col(i).sum().real() * s.g.dx - std::norm(pw[i])));
        }
        suite.add("wigner.position_marginal", eq, 1e-6);
        suite.add("wigner.momentum_marginal", ep, 1e-6);
    }
    const KrylovPhaseSet set = krylov_phase_set(kb);
    const int d = kb.dim();
    {
        double ortho = 0, appx = 0;
        const PhaseField K = spreading_kernel(set);
        for (int n = 0; n < d; ++n)
            for (int m = 0; m < d; ++m) {
                appx = std::max(appx, std::abs(phase_pairing(K, set.field(n, m)) - (n == m ? double(m) : 0.0)));
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) {
                        const cplx ov =
                            set.field(n, m).values.cwiseProduct(set.field(i, j).values.conjugate()).sum() * s.pg.cell_area;
                        ortho = std::max(ortho, std::abs(ov - ((n == i && m == j) ? 1 / (2 * kPi) : 0.0)));
                    }
            }
        suite.add("wigner.krylov_orthonormality", ortho, 1e-6);
        suite.add("wigner.kernel_integrals", appx, 1e-6);

        // complexity
        const double t = 0.5 * cfg.run.t_max;
        const StateVector psi = evolve_state(s.spec, s.psi0, t);
        const double cd = complexity_direct(amplitudes(kb, psi));
        suite.add("complexity.phase_equals_direct", std::abs(cd - complexity_phase(wigner_of_state(psi), K)) / (1 + cd),
                  1e-5);
    }

    // moyal
    const PhaseField Hs = hamiltonian_symbol(s);
    const double hs = Hs.values.cwiseAbs().maxCoeff();
    {
        double gen = 0;
        for (int a = 0; a < 5; ++a)
            gen = std::max(gen, star_genvalue_residual(Hs, wigner_of_state(eigenstate(s.spec, a)), s.spec.eigenvalues(a),
                                                       s.spec.eigenvalues(a)));
        suite.add("moyal.star_genvalue", gen / hs, 1e-6);
        double step = 0;
        for (int n = 0; n + 1 < d; ++n)
            step = std::max(step, max_abs(star_lanczos_step(Hs, set, n).values - kb.b[n + 1] * set.field(n + 1, n).values));
        suite.add("moyal.star_lanczos_step", step / hs, 1e-6);
        const LanczosCoefficients lc = lanczos_coeffs_from_phase(Hs, set);
        double coef = 0;
        for (int n = 0; n < d; ++n) coef = std::max({coef, std::abs(lc.a[n] - kb.a[n]), std::abs(lc.b[n] - kb.b[n])});
        suite.add("moyal.lanczos_from_phase", coef, 1e-6);
    }

    // dynamics
    {
        const double t = 0.5 * cfg.run.t_max;
        const PhaseField W = wigner_of_state(evolve_state(s.spec, s.psi0, t));
        const LiouvilleSplit sp = liouville_split(W, s.V, cfg.run.lambda_max);
        suite.add("dynamics.split_equals_moyal", max_abs(sp.total().values - moyal_rhs(W, Hs).values), 1e-5);
        const RateSplit r = complexity_rate_split(spreading_kernel(set), sp);
        const double h = 1e-3;
        const double fd = (chain_complexity(kb, s, t + h) - chain_complexity(kb, s, t - h)) / (2 * h);
        suite.add("dynamics.rate_split_sum", std::abs(r.total() - fd), 1e-4);
        const PhaseField d2 = wigner_second_derivative_t0(set);
        suite.add("dynamics.second_derivative", std::abs(phase_pairing(spreading_kernel(set), d2) - 2 * kb.b[1] * kb.b[1]),
                  1e-5);
    }

    // superphase on the smallest operator grid
    {
        const Grid1D g = make_grid(16, std::sqrt(kPi * 16), 1.0);
        const PhaseGrid pg = make_phase_grid(g);
        const PhaseField Hq = sample_field(pg, [](double q, double p) { return cplx(0.5 * (p * p + q * q)); });
        const DoublePhaseField Lm = dwt_minus(Hq);
        double closed = 0;
        for (int ip = 0; ip < 16; ++ip)
            for (int kp = 0; kp < 16; ++kp)
                for (int im = 0; im < 16; ++im)
                    for (int km = 0; km < 16; ++km) {
                        const double xq = 0.5 * (pg.q(ip) + pg.q(im)), xp = 0.5 * (pg.p(kp) + pg.p(km));
                        const double sq = pg.q(ip) - pg.q(im), sp = pg.p(kp) - pg.p(km);
                        closed = std::max(closed, std::abs(Lm.at(ip, kp, im, km) - (xq * sq + xp * sp)));
                    }
        suite.add("superphase.liouvillian_symbol", closed, 1e-10);
        const PhaseField A = sample_field(pg, [](double q, double p) { return cplx(std::sin(q) * p + q * q * q); });
        const DoublePhaseField Am = dwt_minus(A), Ap = dwt_plus(A), Hp = dwt_plus(Hq);
        double rec = 0;
        for (int ip = 0; ip < 16; ++ip)
            for (int kp = 0; kp < 16; ++kp)
                for (int im = 0; im < 16; ++im)
                    for (int km = 0; km < 16; ++km)
                        rec = std::max(rec, std::abs(Ap.at(ip, kp, im, km) + 0.5 * Am.at(ip, kp, im, km) - A.values(ip, kp)));
        suite.add("superphase.reconstruction", rec, 1e-10);
        suite.add("superphase.minus_plus_orthogonality", std::abs(double_pairing(Am, Hp)), 1e-8);

        ExperimentConfig oc = cfg;
        oc.system = SystemSpec{};
        oc.system.N = 16;
        oc.system.L = std::sqrt(kPi * 16);
        oc.op.levels = 5;
        const OperatorSide os = operator_side(oc);
        const OperatorMatrix Q = os.unit(position_operator(os.g));
        const KrylovOperatorBasis basis = lanczos_operator(os.Hb, Q, 4, kLanczosTol, os.sector);
        const OperatorKrylovPhaseSet oset(basis);
        const DoublePhaseField K = operator_spreading_kernel(oset);
        const OperatorMatrix Qt = evolve_operator(os.spec, Q, 0.6);
        suite.add("superphase.operator_complexity",
                  std::abs(operator_complexity_phase(K, Qt) - operator_complexity_direct(basis, Qt)), 1e-4);
        const OperatorMatrix Vq = os.squeeze(position_operator(os.g));
        const double od = otoc_direct(Vq, Qt);
        suite.add("superphase.otoc_routes", std::abs(otoc_phase(Vq, Qt) - od) / od, 1e-4);
    }

    w.table("identities", suite.table, kIdSuite);
    write_summary(w, "identity-suite", cfg, json{{"checks", suite.table.rows.size()}, {"pass", suite.ok}});
    return suite.ok ? 0 : 1;
}

int wigner_dump(const ExperimentConfig& cfg, const Options& opt) {
    const Writer w = make_writer(cfg, opt);
    const StateSide s = state_side(cfg);
    const std::vector<double> times = sample_times(cfg.run);
    json index = json::array();
    for (size_t j = 0; j < times.size(); ++j) {
        const PhaseField W = wigner_of_state(evolve_state(s.spec, s.psi0, times[j]));
        char stem[32];
        std::snprintf(stem, sizeof stem, "wigner_%04zu", j);
        if (w.has("bin")) write_field_bin(w.dir / (std::string(stem) + ".bin"), W, kIdWigner);
        if (w.has("csv") || w.has("json") || !w.has("bin")) w.table(std::string(stem) + "_slices", field_slices(W), kIdWigner);
        index.push_back(json{{"file", stem}, {"t", times[j]}, {"integral", W.integral().real()}});
    }
    write_summary(w, "wigner-dump", cfg, json{{"fields", index}, {"pass", true}});
    return 0;
}

int run(const std::string& command, const Options& opt) {
    try {
#ifdef _OPENMP
        if (opt.threads > 0) omp_set_num_threads(opt.threads);
#endif
        if (opt.format) require(*opt.format == "csv" || *opt.format == "json" || *opt.format == "bin", "config",
                                "unknown --format '" + *opt.format + "'");
        const ExperimentConfig cfg = load_config(opt.config);
        if (command == "state-complexity") return state_complexity(cfg, opt);
        if (command == "rate-split") return rate_split(cfg, opt);
        if (command == "operator-complexity") return operator_complexity(cfg, opt);
        if (command == "otoc") return otoc(cfg, opt);
        if (command == "identity-suite") return identity_suite(cfg, opt);
        if (command == "wigner-dump") return wigner_dump(cfg, opt);
        throw Error("usage", "unknown command '" + command + "'");
    } catch (const Error& e) {
        std::cerr << json{{"error", {{"code", e.code()}, {"message", e.what()}, {"command", command}}}}.dump() << "\n";
    } catch (const std::exception& e) {
        std::cerr << json{{"error", {{"code", "internal"}, {"message", e.what()}, {"command", command}}}}.dump() << "\n";
    }
    return 2;
}

} // namespace pk::cli
