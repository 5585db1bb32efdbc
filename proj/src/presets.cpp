#include "cachesim/presets.hpp"

#include "cachesim/errors.hpp"

namespace cachesim::cli {

namespace {

std::vector<double> steps(double lo, double step, double hi) {
    std::vector<double> out;
    for (double v = lo; v <= hi + 0.5 * step; v += step) out.push_back(std::min(v, hi));
    return out;
}

} // namespace

ExperimentConfig preset(const std::string& figure_id) {
    ExperimentConfig cfg; // standard defaults
    cfg.preset_id = figure_id;

    if (figure_id == "fig1") {
        // Rate coverage vs sigma at two cluster densities with n_bar = 5 and
        // q = 0.3, theory plus simulation.
        cfg.mode = Mode::sweep;
        cfg.n_bar = 5.0;
        cfg.q = 0.3;
        cfg.theta_db = 0.0;
        cfg.sweep = SweepAxis{"sigma_m", {5, 10, 15, 20, 25, 30}};
        cfg.curve = SweepAxis{"lambda_p_per_km2", {10, 20}};
        cfg.trials = 200000;
        cfg.output_path = "fig1.csv";
    } else if (figure_id == "fig2") {
        // Rate coverage vs access probability at three SIR thresholds.
        cfg.mode = Mode::sweep;
        cfg.sweep = SweepAxis{"q", steps(0.05, 0.05, 1.0)};
        cfg.curve = SweepAxis{"theta_db", {0, 3, 6}};
        cfg.trials = 200000;
        cfg.output_path = "fig2.csv";
    } else if (figure_id == "fig3") {
        // Offloading gain vs q for the three caching schemes, analytic.
        cfg.mode = Mode::sweep;
        cfg.theta_db = 0.0;
        cfg.sweep = SweepAxis{"q", steps(0.05, 0.05, 1.0)};
        cfg.trials = 0;
        cfg.output_path = "fig3.csv";
    } else if (figure_id == "fig4") {
        // Offloading gain vs popularity skew at the optimal access probability.
        cfg.mode = Mode::sweep;
        cfg.sweep = SweepAxis{"beta", steps(0.0, 0.1, 1.0)};
        cfg.use_q_star = true;
        cfg.trials = 0;
        cfg.output_path = "fig4.csv";
    } else if (figure_id == "fig5") {
        // Histogram of b* at q* and at the sub-optimal point q = 0.6 q*.
        cfg.mode = Mode::optimize;
        cfg.fig5_histogram = true;
        cfg.fig5_q_scale = 0.6;
        cfg.output_path = "fig5.csv";
    } else if (figure_id == "fig6") {
        // Closed-form offloading gain vs sigma at three representative
        // cluster densities.
        cfg.mode = Mode::sweep;
        cfg.closed_form = true;
        cfg.sweep = SweepAxis{"sigma_m", {5, 10, 15, 20, 25, 30}};
        cfg.curve = SweepAxis{"lambda_p_per_km2", {10, 20, 30}};
        cfg.trials = 0;
        cfg.output_path = "fig6.csv";
    } else {
        throw ConfigError("unknown preset '" + figure_id + "' (expected fig1..fig6)");
    }
    return cfg;
}

std::vector<std::string> preset_names() {
    return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6"};
}

} // namespace cachesim::cli
