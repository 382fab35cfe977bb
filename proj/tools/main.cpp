#include "commands.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    CLI::App app{"phase-space Krylov complexity experiments"};
    app.require_subcommand(1);
    pk::cli::Options opt;
    std::string format;
    std::string out;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"state-complexity", "C(t) by the direct chain sum and by the phase-space kernel"},
        {"rate-split", "dC/dt split into classical and odd-order quantum Liouville terms"},
        {"operator-complexity", "operator Krylov complexity by the Liouville sum and the double phase space"},
        {"otoc", "squared commutator by the trace and double phase-space routes"},
        {"identity-suite", "invariant residual table for every module"},
        {"wigner-dump", "Wigner snapshots of the evolving state"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config, "config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory, overrides outputs.directory");
        sub->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json", "bin"}));
        sub->add_option("--seed", opt.seed, "seed for random basis sampling");
        sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::NonNegativeNumber);
    }
    CLI11_PARSE(app, argc, argv);
    if (!out.empty()) opt.out = out;
    if (!format.empty()) opt.format = format;
    return pk::cli::run(app.get_subcommands().front()->get_name(), opt);
}
