#include "cachesim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace cachesim::sim {

namespace {

constexpr std::uint64_t kStreamNetwork = 0;
constexpr std::uint64_t kStreamCoverage = 1;
constexpr std::uint64_t kStreamOffloading = 2;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double dist2(const Point& a, const Point& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// Interference at `at` from every cluster member, each transmitting with
// probability q under unit-mean exponential fading. `skip` marks one member
// (the caterer) to leave out; pass nullptr to include everyone.
double total_interference(const Network& net, const NetworkParams& params, const Point& at,
                          const Point* skip, Rng& rng) {
    double interference = 0.0;
    for (const Cluster& cluster : net.clusters) {
        for (const Point& member : cluster.members) {
            if (skip == &member) continue;
            if (!rng.bernoulli(params.q)) continue;
            const double d2 = dist2(member, at);
            interference += rng.exponential() * std::pow(d2, -0.5 * params.alpha);
        }
    }
    return interference;
}

} // namespace

double SimulationConfig::resolved_window(const NetworkParams& params) const {
    if (window_radius > 0.0) return window_radius;
    return std::max(20.0 * params.sigma, 500.0);
}

void SimulationConfig::validate(const NetworkParams& params) const {
    if (trials < 1) throw std::invalid_argument("SimulationConfig.trials must be >= 1");
    if (fading_draws_per_trial < 1)
        throw std::invalid_argument("SimulationConfig.fading_draws_per_trial must be >= 1");
    if (workers < 0) throw std::invalid_argument("SimulationConfig.workers must be >= 0");
    const double window = resolved_window(params);
    if (window < 20.0 * params.sigma)
        throw std::invalid_argument("SimulationConfig.window_radius must be >= 20 sigma");
}

Network sample_network(const NetworkParams& params, double window_radius, Rng& rng) {
    Network net;
    net.window_radius = window_radius;

    Cluster representative;
    representative.center = Point{0.0, 0.0};
    const long rep_members = rng.poisson(params.n_bar);
    representative.members.reserve(static_cast<size_t>(rep_members));
    for (long i = 0; i < rep_members; ++i) {
        auto [dx, dy] = rng.gaussian_pair(params.sigma);
        representative.members.push_back(Point{dx, dy});
    }
    net.clusters.push_back(std::move(representative));

    const double area = M_PI * window_radius * window_radius;
    const long parents = rng.poisson(params.lambda_p * area);
    net.clusters.reserve(static_cast<size_t>(parents) + 1);
    for (long i = 0; i < parents; ++i) {
        Cluster cluster;
        const double radius = window_radius * std::sqrt(rng.uniform());
        const double angle = 2.0 * M_PI * rng.uniform();
        cluster.center = Point{radius * std::cos(angle), radius * std::sin(angle)};
        const long members = rng.poisson(params.n_bar);
        cluster.members.reserve(static_cast<size_t>(members));
        for (long j = 0; j < members; ++j) {
            auto [dx, dy] = rng.gaussian_pair(params.sigma);
            cluster.members.push_back(Point{cluster.center.x + dx, cluster.center.y + dy});
        }
        net.clusters.push_back(std::move(cluster));
    }
    return net;
}

Network sample_network(const NetworkParams& params, const SimulationConfig& config,
                       long trial_index) {
    params.validate();
    config.validate(params);
    Rng rng(config.seed, static_cast<std::uint64_t>(trial_index), kStreamNetwork);
    return sample_network(params, config.resolved_window(params), rng);
}

CoverageDraw run_coverage_trial(const Network& net, const NetworkParams& params, Rng& rng) {
    const Cluster& rep = net.clusters.front();

    // Representative link: typical and caterer are both Gaussian-displaced
    // around the representative center, so the serving distance is exactly
    // Rayleigh(sqrt(2) sigma). Neither consumes a Poisson member; the members
    // are the interference field.
    auto [tx, ty] = rng.gaussian_pair(params.sigma);
    const Point typical{rep.center.x + tx, rep.center.y + ty};
    auto [cx, cy] = rng.gaussian_pair(params.sigma);
    const Point caterer{rep.center.x + cx, rep.center.y + cy};
    const double r = std::sqrt(dist2(typical, caterer));

    CoverageDraw draw;
    draw.serving_distance = r;
    draw.server_active = rng.bernoulli(params.q);
    if (!draw.server_active) {
        draw.sir = kNan;
        return draw;
    }
    const double fading = rng.exponential();
    const double interference = total_interference(net, params, typical, nullptr, rng);
    const double signal = fading * std::pow(r, -params.alpha);
    draw.sir = interference > 0.0 ? signal / interference
                                  : std::numeric_limits<double>::infinity();
    return draw;
}

OffloadContext OffloadContext::make(const ContentLibrary& lib, const CachingPolicy& policy) {
    lib.validate();
    if (policy.b.size() != lib.popularity.size())
        throw std::invalid_argument("OffloadContext: policy length != library n_f");
    OffloadContext ctx;
    ctx.cum_popularity.resize(lib.popularity.size());
    ctx.cum_b.resize(policy.b.size());
    double acc = 0.0;
    for (size_t i = 0; i < lib.popularity.size(); ++i) {
        acc += lib.popularity[i];
        ctx.cum_popularity[i] = acc;
    }
    ctx.cum_popularity.back() = 1.0;
    double bacc = 0.0;
    for (size_t i = 0; i < policy.b.size(); ++i) {
        bacc += policy.b[i];
        ctx.cum_b[i] = bacc;
    }
    return ctx;
}

namespace {

int draw_request(const OffloadContext& ctx, Rng& rng) {
    const double u = rng.uniform();
    const auto it = std::lower_bound(ctx.cum_popularity.begin(), ctx.cum_popularity.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - ctx.cum_popularity.begin(),
                                                     ctx.cum_popularity.size() - 1));
}

// Systematic sampling over the cumulative caching vector: a device with
// offset u caches file i exactly when some point of {u, u+1, ...} lands in
// [cum_b[i-1], cum_b[i]). Marginals equal b_i and each cache holds exactly
// m files, satisfying the hard budget that independent marking would break.
bool device_caches(const OffloadContext& ctx, int file, double offset) {
    const double hi = ctx.cum_b[static_cast<size_t>(file)];
    const double lo = file > 0 ? ctx.cum_b[static_cast<size_t>(file) - 1] : 0.0;
    const double count = std::max(0.0, std::ceil(hi - offset)) - std::max(0.0, std::ceil(lo - offset));
    return count >= 1.0;
}

} // namespace

TrialOutcome run_offloading_trial(const Network& net, const NetworkParams& params,
                                  const OffloadContext& ctx, Rng& rng,
                                  bool caterer_in_interferer_pool) {
    const Cluster& rep = net.clusters.front();
    TrialOutcome out;
    out.sir = kNan;
    out.serving_distance = kNan;
    out.requested_file = draw_request(ctx, rng);

    // The typical device is an extra cluster member at a Gaussian offset; the
    // Poisson members are the "other" devices that may hold the file.
    auto [tx, ty] = rng.gaussian_pair(params.sigma);
    const Point typical{rep.center.x + tx, rep.center.y + ty};

    if (device_caches(ctx, out.requested_file, rng.uniform())) {
        out.delivery = Delivery::self_cache;
        return out;
    }

    // Cache realizations are drawn for every member in order so the stream
    // position does not depend on earlier hits.
    std::vector<int> candidates;
    candidates.reserve(rep.members.size());
    for (size_t i = 0; i < rep.members.size(); ++i)
        if (device_caches(ctx, out.requested_file, rng.uniform()))
            candidates.push_back(static_cast<int>(i));

    if (candidates.empty()) {
        out.delivery = Delivery::no_caterer;
        return out;
    }
    const int caterer_idx = candidates[rng.uniform_int(candidates.size())];
    const Point& caterer = rep.members[static_cast<size_t>(caterer_idx)];
    out.serving_distance = std::sqrt(dist2(typical, caterer));

    if (!rng.bernoulli(params.q)) {
        out.delivery = Delivery::server_inactive;
        return out;
    }
    const double fading = rng.exponential();
    double interference = total_interference(net, params, typical, &caterer, rng);
    if (caterer_in_interferer_pool) {
        // Variant: the caterer's slot also contributes interference, with an
        // independent access and fading draw.
        if (rng.bernoulli(params.q))
            interference += rng.exponential() * std::pow(out.serving_distance, -params.alpha);
    }
    const double signal = fading * std::pow(out.serving_distance, -params.alpha);
    out.sir = interference > 0.0 ? signal / interference
                                 : std::numeric_limits<double>::infinity();
    out.delivery = out.sir > params.theta ? Delivery::d2d_success : Delivery::d2d_sir_fail;
    return out;
}

TrialOutcome run_offloading_trial(const Network& net, const NetworkParams& params,
                                  const ContentLibrary& lib, const CachingPolicy& policy,
                                  Rng& rng) {
    return run_offloading_trial(net, params, OffloadContext::make(lib, policy), rng, false);
}

double wilson_halfwidth(long successes, long n) {
    if (n <= 0) return 1.0;
    constexpr double z = 1.959963984540054; // 97.5% normal quantile
    const double nh = static_cast<double>(n);
    const double phat = static_cast<double>(successes) / nh;
    const double z2 = z * z;
    return z * std::sqrt(phat * (1.0 - phat) / nh + z2 / (4.0 * nh * nh)) / (1.0 + z2 / nh);
}

Estimate estimate(const NetworkParams& params, const ContentLibrary& lib,
                  const CachingPolicy& policy, const SimulationConfig& config) {
    params.validate();
    config.validate(params);
    if (auto violation = validate_policy(policy, lib))
        throw std::invalid_argument("estimate: invalid policy: " + violation->message);

    const OffloadContext ctx = OffloadContext::make(lib, policy);
    const double window = config.resolved_window(params);
    const int draws_per_trial = config.fading_draws_per_trial;

    struct Tally {
        long coverage_success = 0;
        long offloaded = 0;
        std::array<long, 5> delivery{};
    };

    auto run_range = [&](long begin, long end, Tally& tally) {
        for (long t = begin; t < end; ++t) {
            Rng net_rng(config.seed, static_cast<std::uint64_t>(t), kStreamNetwork);
            const Network net = sample_network(params, window, net_rng);
            Rng cov_rng(config.seed, static_cast<std::uint64_t>(t), kStreamCoverage);
            Rng off_rng(config.seed, static_cast<std::uint64_t>(t), kStreamOffloading);
            for (int d = 0; d < draws_per_trial; ++d) {
                const CoverageDraw draw = run_coverage_trial(net, params, cov_rng);
                if (draw.server_active && draw.sir > params.theta) ++tally.coverage_success;
                const TrialOutcome outcome = run_offloading_trial(
                    net, params, ctx, off_rng, config.caterer_in_interferer_pool);
                ++tally.delivery[static_cast<size_t>(outcome.delivery)];
                if (outcome.delivery == Delivery::self_cache ||
                    outcome.delivery == Delivery::d2d_success)
                    ++tally.offloaded;
            }
        }
    };

    int workers = config.workers > 0 ? config.workers
                                     : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp<int>(workers, 1, 64);
    workers = static_cast<int>(std::min<long>(workers, config.trials));

    std::vector<Tally> tallies(static_cast<size_t>(workers));
    if (workers == 1) {
        run_range(0, config.trials, tallies[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        const long chunk = (config.trials + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const long begin = w * chunk;
            const long end = std::min<long>(config.trials, begin + chunk);
            pool.emplace_back([&, begin, end, w] { run_range(begin, end, tallies[static_cast<size_t>(w)]); });
        }
        for (auto& th : pool) th.join();
    }

    Tally total;
    for (const Tally& t : tallies) {
        total.coverage_success += t.coverage_success;
        total.offloaded += t.offloaded;
        for (size_t i = 0; i < total.delivery.size(); ++i) total.delivery[i] += t.delivery[i];
    }

    Estimate est;
    est.trials = config.trials;
    est.draws = config.trials * draws_per_trial;
    est.upsilon_hat = static_cast<double>(total.coverage_success) / static_cast<double>(est.draws);
    est.p_o_hat = static_cast<double>(total.offloaded) / static_cast<double>(est.draws);
    est.upsilon_halfwidth = wilson_halfwidth(total.coverage_success, est.draws);
    est.p_o_halfwidth = wilson_halfwidth(total.offloaded, est.draws);
    est.delivery_counts = total.delivery;
    return est;
}

} // namespace cachesim::sim
