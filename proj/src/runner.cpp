#include "cachesim/runner.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "cachesim/analytics.hpp"
#include "cachesim/errors.hpp"
#include "cachesim/optimizer.hpp"

namespace cachesim::cli {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt9(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void apply_variable(ExperimentConfig& cfg, const std::string& name, double value) {
    if (name == "q") cfg.q = value;
    else if (name == "sigma_m") cfg.sigma_m = value;
    else if (name == "theta_db") cfg.theta_db = value;
    else if (name == "beta") cfg.beta = value;
    else if (name == "lambda_p_per_km2") cfg.lambda_p_per_km2 = value;
    else if (name == "n_bar") cfg.n_bar = value;
    else if (name == "alpha") cfg.alpha = value;
    else if (name == "n_f") cfg.n_f = static_cast<int>(std::lround(value));
    else if (name == "m") cfg.m = static_cast<int>(std::lround(value));
    else throw ConfigError("unrecognized sweep variable '" + name + "'");
}

// q* depends on the coverage geometry only; memoized so a beta sweep at q*
// optimizes the access probability once. get() may be called from the row
// pool, hence the lock.
class QStarCache {
public:
    double get(const NetworkParams& params, double search_tol) {
        const std::array<double, 6> key{params.lambda_p, params.n_bar, params.sigma,
                                        params.alpha, params.theta, search_tol};
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const auto access = opt::optimize_access(params, search_tol);
        cache_.emplace(key, access.q_star);
        return access.q_star;
    }

private:
    std::mutex mutex_;
    std::map<std::array<double, 6>, double> cache_;
};

CachingPolicy policy_for(Scheme scheme, const NetworkParams& params, const ContentLibrary& lib,
                         double upsilon) {
    switch (scheme) {
        case Scheme::pc: return opt::optimize_caching(params, lib, upsilon).b_star;
        case Scheme::zipf: return zipf_policy(lib);
        case Scheme::uniform: return uniform_policy(lib);
    }
    return uniform_policy(lib);
}

struct RowInputs {
    ExperimentConfig cfg; // per-row resolved config
    double swept_value = 0.0;
};

SweepRow compute_row_analytic(const RowInputs& in, QStarCache& qstar) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepRow row;
    row.swept_value = in.swept_value;
    const ContentLibrary lib = in.cfg.library();
    NetworkParams params = in.cfg.network();
    if (in.cfg.use_q_star) params.q = qstar.get(params, in.cfg.search_tol);
    row.q = params.q;

    const double upsilon = in.cfg.closed_form
                               ? analytics::closed_form_single_link_coverage(params)
                               : analytics::rate_coverage(params).value;
    row.upsilon_analytic = upsilon;
    row.p_o_pc = analytics::offloading_gain_given(
        lib, opt::optimize_caching(params, lib, upsilon).b_star, params.n_bar, upsilon);
    row.p_o_zipf = analytics::offloading_gain_given(lib, zipf_policy(lib), params.n_bar, upsilon);
    row.p_o_uniform =
        analytics::offloading_gain_given(lib, uniform_policy(lib), params.n_bar, upsilon);

    row.upsilon_sim = kNan;
    row.p_o_sim = kNan;
    row.upsilon_sim_halfwidth = kNan;
    row.p_o_sim_halfwidth = kNan;
    row.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

void add_simulation(SweepRow& row, const RowInputs& in, QStarCache& qstar) {
    const auto t0 = std::chrono::steady_clock::now();
    const ContentLibrary lib = in.cfg.library();
    NetworkParams params = in.cfg.network();
    if (in.cfg.use_q_star) params.q = qstar.get(params, in.cfg.search_tol);
    const CachingPolicy policy = policy_for(in.cfg.scheme, params, lib, row.upsilon_analytic);
    const sim::Estimate est = sim::estimate(params, lib, policy, in.cfg.simulation());
    row.upsilon_sim = est.upsilon_hat;
    row.p_o_sim = est.p_o_hat;
    row.upsilon_sim_halfwidth = est.upsilon_halfwidth;
    row.p_o_sim_halfwidth = est.p_o_halfwidth;
    row.wall_time_ms +=
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void write_csv(const std::string& path, const ExperimentConfig& resolved,
               const std::vector<std::string>& notes, const std::string& header,
               const std::vector<std::string>& rows) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write output file '" + path + "'");
    for (const auto& [k, v] : config_to_kv(resolved)) out << "# " << k << "=" << v << "\n";
    for (const auto& note : notes) out << "# " << note << "\n";
    out << header << "\n";
    for (const auto& row : rows) out << row << "\n";
    if (!out) throw ConfigError("write failed for output file '" + path + "'");
}

std::string row_to_csv(const SweepRow& r) {
    std::ostringstream os;
    os << fmt9(r.swept_value) << ',' << fmt9(r.q) << ',' << fmt9(r.upsilon_analytic) << ','
       << fmt9(r.upsilon_sim) << ',' << fmt9(r.p_o_pc) << ',' << fmt9(r.p_o_zipf) << ','
       << fmt9(r.p_o_uniform) << ',' << fmt9(r.p_o_sim) << ',' << fmt9(r.upsilon_sim_halfwidth)
       << ',' << fmt9(r.p_o_sim_halfwidth) << ',' << fmt9(r.wall_time_ms);
    return os.str();
}

// Insert a suffix before the extension: fig2.csv + theta_db 3 -> fig2_theta_db_3.csv
std::string curve_path(const std::string& base, const std::string& variable, double value) {
    const size_t dot = base.rfind('.');
    const std::string stem = dot == std::string::npos ? base : base.substr(0, dot);
    const std::string ext = dot == std::string::npos ? ".csv" : base.substr(dot);
    return stem + "_" + variable + "_" + fmt9(value) + ext;
}

// Rows are computed by a small pool when no Monte Carlo is involved; the
// simulator parallelizes internally, so simulated rows run one at a time.
std::vector<SweepRow> compute_rows(const std::vector<RowInputs>& inputs, QStarCache& qstar,
                                   bool with_sim) {
    std::vector<SweepRow> rows(inputs.size());
    if (inputs.empty()) return rows;

    unsigned pool = std::min<unsigned>(std::thread::hardware_concurrency(),
                                       static_cast<unsigned>(inputs.size()));
    if (pool < 2) pool = 1;
    if (pool == 1) {
        for (size_t i = 0; i < inputs.size(); ++i) rows[i] = compute_row_analytic(inputs[i], qstar);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(pool);
        std::vector<std::exception_ptr> errors(pool);
        for (unsigned w = 0; w < pool; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (size_t i = next.fetch_add(1); i < inputs.size(); i = next.fetch_add(1))
                        rows[i] = compute_row_analytic(inputs[i], qstar);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : workers) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    if (with_sim)
        for (size_t i = 0; i < inputs.size(); ++i) add_simulation(rows[i], inputs[i], qstar);
    return rows;
}

std::vector<std::string> run_point_or_sweep(const ExperimentConfig& cfg) {
    QStarCache qstar;
    std::vector<std::string> written;

    std::vector<std::pair<std::string, ExperimentConfig>> curves;
    if (cfg.curve) {
        for (double cv : cfg.curve->values) {
            ExperimentConfig curve_cfg = cfg;
            curve_cfg.curve.reset();
            apply_variable(curve_cfg, cfg.curve->variable, cv);
            curve_cfg.output_path = curve_path(cfg.output_path, cfg.curve->variable, cv);
            curves.emplace_back(cfg.curve->variable + " " + fmt9(cv), curve_cfg);
        }
    } else {
        curves.emplace_back("", cfg);
    }

    for (auto& [label, curve_cfg] : curves) {
        std::vector<RowInputs> inputs;
        if (curve_cfg.mode == Mode::sweep) {
            for (double v : curve_cfg.sweep->values) {
                RowInputs in{curve_cfg, v};
                apply_variable(in.cfg, curve_cfg.sweep->variable, v);
                inputs.push_back(std::move(in));
            }
        } else {
            // analyze / simulate: single point, swept_value = q
            inputs.push_back(RowInputs{curve_cfg, curve_cfg.q});
        }

        const bool with_sim = curve_cfg.mode != Mode::analyze && curve_cfg.trials > 0;
        std::vector<SweepRow> rows = compute_rows(inputs, qstar, with_sim);

        std::vector<std::string> lines;
        lines.reserve(rows.size());
        for (const auto& r : rows) lines.push_back(row_to_csv(r));
        std::vector<std::string> notes;
        if (!curve_cfg.preset_id.empty()) notes.push_back("preset " + curve_cfg.preset_id);
        if (!label.empty()) notes.push_back("curve " + label);
        write_csv(curve_cfg.output_path, curve_cfg, notes, kSweepHeader, lines);
        written.push_back(curve_cfg.output_path);
    }
    return written;
}

std::string stem_of(const std::string& path) {
    const size_t dot = path.rfind('.');
    return dot == std::string::npos ? path : path.substr(0, dot);
}

void write_policy_csv(const std::string& path, const ExperimentConfig& resolved,
                      const ContentLibrary& lib, const CachingPolicy& policy,
                      const std::vector<std::string>& notes) {
    std::vector<std::string> rows;
    rows.reserve(policy.b.size());
    for (size_t i = 0; i < policy.b.size(); ++i) {
        std::ostringstream os;
        os << (i + 1) << ',' << fmt9(lib.popularity[i]) << ',' << fmt9(policy.b[i]);
        rows.push_back(os.str());
    }
    write_csv(path, resolved, notes, "file_index,popularity,b_star", rows);
}

void write_histogram_csv(const std::string& path, const ExperimentConfig& resolved,
                         const CachingPolicy& policy, const std::vector<std::string>& notes) {
    constexpr int kBins = 10;
    std::array<long, kBins> counts{};
    for (double b : policy.b) {
        int bin = static_cast<int>(b * kBins);
        bin = std::min(std::max(bin, 0), kBins - 1); // b = 1 lands in the top bin
        ++counts[static_cast<size_t>(bin)];
    }
    std::vector<std::string> rows;
    for (int i = 0; i < kBins; ++i) {
        std::ostringstream os;
        os << fmt9(static_cast<double>(i) / kBins) << ',' << fmt9(static_cast<double>(i + 1) / kBins)
           << ',' << counts[static_cast<size_t>(i)];
        rows.push_back(os.str());
    }
    write_csv(path, resolved, notes, "bin_lo,bin_hi,count", rows);
}

std::vector<std::string> run_optimize(const ExperimentConfig& cfg) {
    const ContentLibrary lib = cfg.library();
    const NetworkParams params = cfg.network();
    const auto [access, caching] = opt::solve_joint(params, lib, cfg.search_tol);

    const double po_zipf = analytics::offloading_gain_given(lib, zipf_policy(lib), params.n_bar,
                                                            access.upsilon_star);
    const double po_uniform = analytics::offloading_gain_given(lib, uniform_policy(lib),
                                                               params.n_bar, access.upsilon_star);

    std::vector<std::string> notes = {"optimize summary: columns are the joint solution"};
    if (!cfg.preset_id.empty()) notes.insert(notes.begin(), "preset " + cfg.preset_id);

    std::ostringstream row;
    row << fmt9(access.q_star) << ',' << fmt9(access.upsilon_star) << ',' << access.iterations
        << ',' << (access.unimodal ? 1 : 0) << ',' << fmt9(caching.v_star) << ','
        << fmt9(caching.objective) << ',' << fmt9(po_zipf) << ',' << fmt9(po_uniform);
    write_csv(cfg.output_path, cfg, notes,
              "q_star,upsilon_star,access_iterations,grid_unimodal,v_star,p_o_pc,p_o_zipf,p_o_uniform",
              {row.str()});
    std::vector<std::string> written{cfg.output_path};

    const std::string stem = stem_of(cfg.output_path);
    write_policy_csv(stem + "_policy.csv", cfg, lib, caching.b_star,
                     {"b* at q_star " + fmt9(access.q_star)});
    written.push_back(stem + "_policy.csv");

    if (cfg.fig5_histogram) {
        const double q_sub = cfg.fig5_q_scale * access.q_star;
        NetworkParams sub = params;
        sub.q = q_sub;
        const double ups_sub = analytics::rate_coverage(sub).value;
        const auto caching_sub = opt::optimize_caching(sub, lib, ups_sub);
        write_histogram_csv(stem + "_hist_qstar.csv", cfg, caching.b_star,
                            {"histogram of b* at the optimal q " + fmt9(access.q_star)});
        write_histogram_csv(stem + "_hist_qsub.csv", cfg, caching_sub.b_star,
                            {"histogram of b* at the sub-optimal q " + fmt9(q_sub) + " (" + fmt9(cfg.fig5_q_scale) +
                             " of q*), upsilon " + fmt9(ups_sub)});
        written.push_back(stem + "_hist_qstar.csv");
        written.push_back(stem + "_hist_qsub.csv");
    }
    return written;
}

} // namespace

std::vector<std::string> run(const ExperimentConfig& cfg) {
    cfg.validate();
    switch (cfg.mode) {
        case Mode::optimize: return run_optimize(cfg);
        case Mode::analyze:
        case Mode::simulate:
        case Mode::sweep: return run_point_or_sweep(cfg);
    }
    throw ConfigError("unreachable mode");
}

int run_cli(const ExperimentConfig& cfg) {
    try {
        const auto written = run(cfg);
        for (const auto& path : written) std::cout << "wrote " << path << "\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericsError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace cachesim::cli
