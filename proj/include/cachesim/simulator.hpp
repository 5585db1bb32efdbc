#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cachesim/model.hpp"
#include "cachesim/rng.hpp"

namespace cachesim::sim {

struct SimulationConfig {
    long trials = 10000;          // network realizations
    double window_radius = 0.0;   // m; 0 selects max(20 sigma, 500 m)
    std::uint64_t seed = 1;
    int fading_draws_per_trial = 1;
    // Open modeling question: the analytic intra-cluster term counts the
    // catering device's slot in the interference field. false (default)
    // excludes the caterer physically; true re-adds it with an independent
    // access and fading draw so both variants can be measured.
    bool caterer_in_interferer_pool = false;
    int workers = 0;              // worker threads for estimate(); 0 = hardware

    double resolved_window(const NetworkParams& params) const;
    void validate(const NetworkParams& params) const;
};

enum class Delivery { self_cache, d2d_success, d2d_sir_fail, server_inactive, no_caterer };

struct TrialOutcome {
    int requested_file = -1;       // 0-based index
    Delivery delivery = Delivery::no_caterer;
    double sir = 0.0;              // linear; NaN unless a transmission happened
    double serving_distance = 0.0; // m; NaN unless a caterer was selected
};

struct Point {
    double x = 0.0, y = 0.0;
};

struct Cluster {
    Point center;
    std::vector<Point> members;
};

// clusters[0] is the representative cluster, centered at the origin; the rest
// come from the parent PPP on the sampling disc.
struct Network {
    std::vector<Cluster> clusters;
    double window_radius = 0.0;
};

// Deterministic in (config.seed, trial_index).
Network sample_network(const NetworkParams& params, const SimulationConfig& config,
                       long trial_index);
Network sample_network(const NetworkParams& params, double window_radius, Rng& rng);

struct CoverageDraw {
    bool server_active = false;
    double sir = 0.0;              // +inf when no interferer was active
    double serving_distance = 0.0; // m
};

// One delivery attempt over the representative link: typical and caterer are
// a dedicated Gaussian-displaced pair, every cluster member everywhere is an
// independent slotted-ALOHA interferer, distances are exact.
CoverageDraw run_coverage_trial(const Network& net, const NetworkParams& params, Rng& rng);

// Precomputed request/cache distributions shared across offloading trials.
struct OffloadContext {
    std::vector<double> cum_popularity; // cumulative request probabilities
    std::vector<double> cum_b;          // cumulative caching budget, cum_b[i] = b_1+..+b_i

    static OffloadContext make(const ContentLibrary& lib, const CachingPolicy& policy);
};

TrialOutcome run_offloading_trial(const Network& net, const NetworkParams& params,
                                  const OffloadContext& ctx, Rng& rng,
                                  bool caterer_in_interferer_pool = false);
TrialOutcome run_offloading_trial(const Network& net, const NetworkParams& params,
                                  const ContentLibrary& lib, const CachingPolicy& policy,
                                  Rng& rng);

struct Estimate {
    double p_o_hat = 0.0;
    double upsilon_hat = 0.0;
    double p_o_halfwidth = 0.0;      // Wilson 95%
    double upsilon_halfwidth = 0.0;  // Wilson 95%
    long trials = 0;
    long draws = 0;                  // trials * fading_draws_per_trial
    std::array<long, 5> delivery_counts{}; // indexed by Delivery
};

// Monte Carlo ground truth for the rate coverage and the offloading gain.
// Bit-identical for a fixed seed regardless of worker count.
Estimate estimate(const NetworkParams& params, const ContentLibrary& lib,
                  const CachingPolicy& policy, const SimulationConfig& config);

// Wilson 95% score interval halfwidth for k successes out of n.
double wilson_halfwidth(long successes, long n);

} // namespace cachesim::sim
