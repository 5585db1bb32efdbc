#pragma once

#include <string>
#include <vector>

#include "cachesim/config.hpp"

namespace cachesim::cli {

// One output row; written in SweepRow column order. Simulation columns are
// NaN when the row carries no Monte Carlo run.
struct SweepRow {
    double swept_value = 0.0;
    double q = 0.0;
    double upsilon_analytic = 0.0;
    double upsilon_sim = 0.0;
    double p_o_pc = 0.0;
    double p_o_zipf = 0.0;
    double p_o_uniform = 0.0;
    double p_o_sim = 0.0;
    double upsilon_sim_halfwidth = 0.0;
    double p_o_sim_halfwidth = 0.0;
    double wall_time_ms = 0.0;
};

inline const char* kSweepHeader =
    "swept_value,q,upsilon_analytic,upsilon_sim,p_o_pc,p_o_zipf,p_o_uniform,"
    "p_o_sim,upsilon_sim_halfwidth,p_o_sim_halfwidth,wall_time_ms";

// Executes the configured experiment and writes the CSV file(s).
// Returns the paths written. Throws ConfigError / NumericsError.
std::vector<std::string> run(const ExperimentConfig& cfg);

// run() wrapped in the CLI exit-code contract: 0 success, 2 configuration
// error, 3 numerical non-convergence.
int run_cli(const ExperimentConfig& cfg);

} // namespace cachesim::cli
