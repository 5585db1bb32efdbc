#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cachesim/model.hpp"
#include "cachesim/simulator.hpp"

namespace cachesim::cli {

enum class Mode { analyze, optimize, simulate, sweep };
enum class Scheme { pc, zipf, uniform };

struct SweepAxis {
    std::string variable; // one of the recognized parameter names
    std::vector<double> values;
};

// Experiment description in Table-I units: cluster density in clusters/km^2,
// SIR threshold in dB, distances in meters. Conversion to SI linear happens
// only at network().
struct ExperimentConfig {
    // network.*
    double lambda_p_per_km2 = 10.0;
    double n_bar = 4.0;
    double sigma_m = 10.0;
    double alpha = 4.0;
    double theta_db = 0.0;
    double p_d_w = 1.0;
    double q = 0.3;

    // library.*
    int n_f = 100;
    int m = 8;
    double beta = 0.5;

    Mode mode = Mode::analyze;
    Scheme scheme = Scheme::pc; // policy simulated by simulate/sweep modes

    std::optional<SweepAxis> sweep; // row axis
    std::optional<SweepAxis> curve; // one output file per curve value

    // sim.*
    long trials = 200000;
    double window_radius_m = 0.0; // 0 = auto
    std::uint64_t seed = 1;
    int fading_draws_per_trial = 1;
    bool caterer_in_interferer_pool = false;
    int workers = 0;

    // run.*
    double search_tol = 1e-4;  // q* bisection width
    bool use_q_star = false;   // rows evaluated at q* instead of network.q
    bool closed_form = false;  // single-link closed-form analytics
    bool fig5_histogram = false;
    double fig5_q_scale = 0.6; // sub-optimal operating point q = scale * q*

    std::string output_path = "cachesim_out.csv";
    std::string preset_id; // informational

    NetworkParams network() const;
    ContentLibrary library() const;
    sim::SimulationConfig simulation() const;
    void validate() const; // throws ConfigError
};

// Strict key=value application; unknown keys and unparsable values throw
// ConfigError naming the key.
void apply_key_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Flat key-value file: '#' comments, blank lines, dotted keys, last wins.
ExperimentConfig parse_config_file(const std::string& path);

// Full resolved configuration as the canonical key set; parsing these back
// reproduces the config exactly (doubles serialized with 17 digits).
std::map<std::string, std::string> config_to_kv(const ExperimentConfig& cfg);

// Reads the "# key=value" metadata block of a CSV produced by run().
ExperimentConfig config_from_csv_metadata(const std::string& csv_path);

const char* mode_name(Mode mode);
const char* scheme_name(Scheme scheme);

} // namespace cachesim::cli
