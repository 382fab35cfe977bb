#pragma once

#include "phasekrylov/quantum.hpp"
#include "phasekrylov/superphase.hpp"
#include "phasekrylov/wigner.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace pk {

struct SystemSpec {
    int N = 256;
    double L = 20.0;
    double mass = 1.0;
    std::string potential = "harmonic";  // harmonic | quartic | polynomial | free
    double omega = 1.0;
    double g = 0.0;                      // quartic coupling
    std::vector<double> coeffs;          // polynomial coefficients c_0, c_1, ...
};

struct StateSpec {
    std::string kind = "coherent";  // coherent | gaussian | eigenstate
    double q0 = 0.0;
    double p0 = 0.0;
    double width = 1.0;
    int index = 0;
};

struct RunSpec {
    double t_max = 1.0;
    int n_samples = 16;
    int k_max = 32;
    double tol = 1e-5;  // verification tolerance of the command
    int lambda_max = 3;
    int n_bases = 0;    // random bases for the minimization probe, 0 skips it
};

// operator-side commands only
struct OperatorSpec {
    std::string seed = "position";   // position | momentum | hamiltonian | hamiltonian_squared
    std::string probe = "position";  // V of the otoc
    int levels = 6;
};

struct OutputSpec {
    std::string directory = "out";
    std::vector<std::string> formats{"csv"};
};

struct ExperimentConfig {
    SystemSpec system;
    StateSpec state;
    RunSpec run;
    OperatorSpec op;
    OutputSpec outputs;
};

// ini text: [system] [state] [run] [operator] [outputs], key = value, ';' comments
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string format_config(const ExperimentConfig& cfg);
void validate(const ExperimentConfig& cfg);

Potential make_potential(const SystemSpec& s);
Grid1D make_system_grid(const SystemSpec& s);
StateVector make_initial_state(const StateSpec& st, const SystemSpec& sys, const SpectralDecomposition& spec);
OperatorMatrix named_operator(const std::string& name, const Grid1D& g, const OperatorMatrix& H);

// shortest text that reads back to the same double
std::string format_double(double x);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    // optional leading text column
    std::string label_column{};
    std::vector<std::string> labels{};
};

using json = nlohmann::ordered_json;

// every writer leaves <file>.meta.json next to the data naming the identity it instantiates
void write_table_csv(const std::filesystem::path& path, const Table& t, const std::string& identity);
void write_table_json(const std::filesystem::path& path, const Table& t, const std::string& identity);
void write_json(const std::filesystem::path& path, const json& j);

// row-major float64, real plane then imaginary plane
void write_field_bin(const std::filesystem::path& path, const PhaseField& f, const std::string& identity);
void write_double_field_bin(const std::filesystem::path& path, const DoublePhaseField& f, const std::string& identity);
PhaseField read_field_bin(const std::filesystem::path& path);

// p = 0 and q = 0 lines of a field (nearest grid line)
Table field_slices(const PhaseField& f);
// x = 0 as a function of xi_q at xi_p = 0
Table double_field_centre_slice(const DoublePhaseField& f);
// xi = 0 as a function of q at p = 0
Table double_field_chord_slice(const DoublePhaseField& f);

json field_metadata(const PhaseField& f, const std::string& identity);

} // namespace pk
