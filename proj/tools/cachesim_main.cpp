#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cachesim/config.hpp"
#include "cachesim/errors.hpp"
#include "cachesim/presets.hpp"
#include "cachesim/runner.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string preset_id;
    std::optional<long> seed;
    std::optional<std::string> out;
    std::optional<long> trials;
    std::optional<int> workers;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "flat key=value configuration file");
    sub->add_option("--preset", args.preset_id, "figure preset (fig1..fig6)");
    sub->add_option("--seed", args.seed, "simulation seed");
    sub->add_option("--out", args.out, "output CSV path");
    sub->add_option("--trials", args.trials, "Monte Carlo trials");
    sub->add_option("--threads", args.workers, "simulation worker threads (0 = hardware)");
}

// defaults -> preset -> config file -> flags, mode forced by the subcommand
cachesim::cli::ExperimentConfig resolve(const CommonArgs& args, cachesim::cli::Mode mode) {
    using namespace cachesim::cli;
    ExperimentConfig cfg;
    if (!args.preset_id.empty()) cfg = preset(args.preset_id);
    if (!args.config_path.empty()) {
        ExperimentConfig file_cfg = parse_config_file(args.config_path);
        if (!args.preset_id.empty()) {
            // preset provides the base; replay the file on top of it
            std::ifstream in(args.config_path);
            std::string line;
            while (std::getline(in, line)) {
                const size_t hash = line.find('#');
                if (hash != std::string::npos) line.erase(hash);
                const size_t eq = line.find('=');
                if (eq == std::string::npos) continue;
                apply_key_value(cfg, line.substr(0, eq), line.substr(eq + 1));
            }
        } else {
            cfg = file_cfg;
        }
    }
    cfg.mode = mode;
    if (args.seed) cfg.seed = static_cast<std::uint64_t>(*args.seed);
    if (args.out) cfg.output_path = *args.out;
    if (args.trials) cfg.trials = *args.trials;
    if (args.workers) cfg.workers = *args.workers;
    cfg.validate();
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cachesim: clustered D2D cache offloading analysis, optimization and simulation"};
    app.require_subcommand(1);

    CommonArgs args;
    auto* analyze = app.add_subcommand("analyze", "analytic evaluation at one operating point");
    auto* optimize = app.add_subcommand("optimize", "joint access and caching optimization");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo validation at one operating point");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep with CSV output");
    for (auto* sub : {analyze, optimize, simulate, sweep}) add_common(sub, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    using cachesim::cli::Mode;
    Mode mode = Mode::analyze;
    if (optimize->parsed()) mode = Mode::optimize;
    else if (simulate->parsed()) mode = Mode::simulate;
    else if (sweep->parsed()) mode = Mode::sweep;

    try {
        return cachesim::cli::run_cli(resolve(args, mode));
    } catch (const cachesim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}
