#pragma once

#include "phasekrylov/io.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace pk::cli {

struct Options {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::uint64_t seed = 1;
    int threads = 0;  // 0 keeps the runtime default
};

// 0 when every checked identity holds, 1 when one is violated; throws pk::Error on bad input
int state_complexity(const ExperimentConfig& cfg, const Options& opt);
int rate_split(const ExperimentConfig& cfg, const Options& opt);
int operator_complexity(const ExperimentConfig& cfg, const Options& opt);
int otoc(const ExperimentConfig& cfg, const Options& opt);
int identity_suite(const ExperimentConfig& cfg, const Options& opt);
int wigner_dump(const ExperimentConfig& cfg, const Options& opt);

// loads the config, applies the flags, dispatches and turns errors into JSON on stderr with exit code 2
int run(const std::string& command, const Options& opt);

} // namespace pk::cli
