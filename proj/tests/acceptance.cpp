// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cachesim/analytics.hpp"
#include "cachesim/optimizer.hpp"
#include "cachesim/simulator.hpp"
#include "oracles.hpp"

using namespace cachesim;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

NetworkParams table1(double q) {
    return NetworkParams{1e-5, 4.0, 10.0, 4.0, 1.0, 1.0, q};
}

// ---------------------------------------------------------------------------
// 1. Analytics vs simulation on the default parameter grid
void criterion1() {
    const auto t0 = Clock::now();
    bool pass = true;
    double worst_gap = 0.0, worst_point = 0.0, max_point_seconds = 0.0;
    const auto lib = ContentLibrary::make(100, 8, 0.5);
    const auto policy = uniform_policy(lib);
    for (double q : {0.2, 0.5, 0.8}) {
        for (double sigma : {5.0, 10.0, 20.0, 30.0}) {
            const auto p0 = Clock::now();
            auto params = table1(q);
            params.sigma = sigma;
            const double ana = analytics::rate_coverage(params).value;
            sim::SimulationConfig cfg;
            cfg.trials = 200000;
            cfg.seed = 20260810;
            const auto est = sim::estimate(params, lib, policy, cfg);
            const double gap = std::abs(ana - est.upsilon_hat);
            const double secs = seconds_since(p0);
            max_point_seconds = std::max(max_point_seconds, secs);
            if (gap > worst_gap) {
                worst_gap = gap;
                worst_point = q * 1000 + sigma;
            }
            if (gap > 0.03 || secs > 60.0) pass = false;
        }
    }
    char detail[256];
    std::snprintf(detail, sizeof detail,
                  "max |ana-sim| = %.4f (tol 0.03, worst q*1000+sigma=%.0f), slowest point "
                  "%.1f s (limit 60), total %.0f s",
                  worst_gap, worst_point, max_point_seconds, seconds_since(t0));
    report(1, "analytics-simulation consistency", pass, detail);
}

// ---------------------------------------------------------------------------
// 2. Strict monotonicity of the analytic coverage and the closed form
void criterion2() {
    bool pass = true;
    // coverage grid: n_bar = 5, q = 0.3, theta = 0 dB, two densities
    std::vector<std::vector<double>> ups;
    for (double lam_km2 : {10.0, 20.0}) {
        std::vector<double> row;
        for (double sigma : {5.0, 10.0, 15.0, 20.0, 25.0, 30.0}) {
            NetworkParams p{lam_km2 * 1e-6, 5.0, sigma, 4.0, 1.0, 1.0, 0.3};
            row.push_back(analytics::rate_coverage(p).value);
        }
        for (size_t i = 1; i < row.size(); ++i)
            if (!(row[i] < row[i - 1])) pass = false;
        ups.push_back(row);
    }
    for (size_t i = 0; i < ups[0].size(); ++i)
        if (!(ups[1][i] < ups[0][i])) pass = false;

    // closed-form offloading gain grid with the per-point optimal policy
    const auto lib = ContentLibrary::make(100, 8, 0.5);
    std::vector<std::vector<double>> po;
    for (double lam_km2 : {10.0, 20.0, 30.0}) {
        std::vector<double> row;
        for (double sigma : {5.0, 10.0, 15.0, 20.0, 25.0, 30.0}) {
            NetworkParams p{lam_km2 * 1e-6, 4.0, sigma, 4.0, 1.0, 1.0, 0.5};
            const double cf = analytics::closed_form_single_link_coverage(p);
            const auto sol = opt::optimize_caching(p, lib, cf);
            row.push_back(analytics::closed_form_offloading_gain(p, lib, sol.b_star));
        }
        for (size_t i = 1; i < row.size(); ++i)
            if (!(row[i] < row[i - 1])) pass = false;
        po.push_back(row);
    }
    for (size_t c = 1; c < po.size(); ++c)
        for (size_t i = 0; i < po[c].size(); ++i)
            if (!(po[c][i] < po[c - 1][i])) pass = false;

    char detail[256];
    std::snprintf(detail, sizeof detail,
                  "coverage grid strictly decreasing in sigma and lambda_p; closed-form gain "
                  "strictly decreasing on the 3x6 grid (zero tolerance)");
    report(2, "monotonic geometry dependence", pass, detail);
}

// ---------------------------------------------------------------------------
// 3. Optimal access behavior; the 0 dB solution is reused by criterion 4
double g_qstar_0db = 0.0;
double g_upsstar_0db = 0.0;

void criterion3() {
    const auto t0 = Clock::now();
    bool pass = true;
    double qs[3] = {0, 0, 0};
    int idx = 0;
    for (double theta_db : {0.0, 3.0, 6.0}) {
        auto params = table1(0.5);
        params.theta = units::db_to_linear(theta_db);
        const auto res = opt::optimize_access(params, 1e-3);
        qs[idx++] = res.q_star;
        if (theta_db == 0.0) {
            g_qstar_0db = res.q_star;
            g_upsstar_0db = res.upsilon_star;
            if (res.q_star < 0.8) pass = false;
        }
    }
    if (!(qs[0] >= qs[1] - 1e-9 && qs[1] >= qs[2] - 1e-9)) pass = false;
    const double secs = seconds_since(t0);
    if (secs > 300.0) pass = false;
    char detail[256];
    std::snprintf(detail, sizeof detail,
                  "q*(0dB)=%.3f (>= 0.8), q*(3dB)=%.3f, q*(6dB)=%.3f nonincreasing, %.0f s "
                  "(limit 300)",
                  qs[0], qs[1], qs[2], secs);
    report(3, "optimal access behavior", pass, detail);
}

// ---------------------------------------------------------------------------
// 4. Scheme ordering and the optimized-vs-Zipf gap at beta = 1
void criterion4() {
    bool pass = true;
    const auto lib = ContentLibrary::make(100, 8, 0.5);
    const auto zipf_pol = zipf_policy(lib);
    const auto uni_pol = uniform_policy(lib);
    double worst_margin = 1.0;
    for (int i = 1; i <= 20; ++i) {
        const double q = 0.05 * i;
        auto params = table1(q);
        const double ups = analytics::rate_coverage(params).value;
        const auto sol = opt::optimize_caching(params, lib, ups);
        const double po_pc = sol.objective;
        const double po_zipf = analytics::offloading_gain_given(lib, zipf_pol, 4.0, ups);
        const double po_uni = analytics::offloading_gain_given(lib, uni_pol, 4.0, ups);
        worst_margin = std::min({worst_margin, po_pc - po_zipf, po_zipf - po_uni});
        if (!(po_pc >= po_zipf - 1e-9 && po_zipf >= po_uni - 1e-9)) pass = false;
    }

    // gap vs the Zipf baseline at beta = 1 and q = q*
    const auto lib1 = ContentLibrary::make(100, 8, 1.0);
    auto at_star = table1(g_qstar_0db);
    const auto sol = opt::optimize_caching(at_star, lib1, g_upsstar_0db);
    const double po_pc = sol.objective;
    const double po_zipf =
        analytics::offloading_gain_given(lib1, zipf_policy(lib1), 4.0, g_upsstar_0db);
    const double gap_points = 100.0 * (po_pc - po_zipf);
    const double gap_relative = 100.0 * (po_pc / po_zipf - 1.0);
    // The reported ~10% improvement is consistent with the percentage-point
    // measure; the ratio measure is printed alongside for transparency.
    if (!(gap_points >= 5.0 && gap_points <= 15.0)) pass = false;

    char detail[256];
    std::snprintf(detail, sizeof detail,
                  "ordering pc >= zipf >= uniform on 20-point q grid (min margin %.4f); beta=1 "
                  "gap at q*=%.3f: %.2f points in [5,15] (ratio %.1f%%)",
                  worst_margin, g_qstar_0db, gap_points, gap_relative);
    report(4, "scheme ordering and optimized-vs-Zipf gap", pass, detail);
}

// ---------------------------------------------------------------------------
// 5. All schemes coincide at beta = 0
void criterion5() {
    const auto lib = ContentLibrary::make(100, 8, 0.0);
    auto params = table1(0.5);
    const double ups = analytics::rate_coverage(params).value;
    const double po_pc = opt::optimize_caching(params, lib, ups).objective;
    const double po_zipf = analytics::offloading_gain_given(lib, zipf_policy(lib), 4.0, ups);
    const double po_uni = analytics::offloading_gain_given(lib, uniform_policy(lib), 4.0, ups);
    const double spread = std::max({po_pc, po_zipf, po_uni}) - std::min({po_pc, po_zipf, po_uni});
    char detail[128];
    std::snprintf(detail, sizeof detail, "spread across schemes %.2e (tol 1e-9)", spread);
    report(5, "scheme coincidence at beta = 0", spread <= 1e-9, detail);
}

// ---------------------------------------------------------------------------
// 6. KKT solution vs brute-force oracle on random small instances
void criterion6() {
    const auto t0 = Clock::now();
    bool pass = true;
    double worst_coord = 0.0, worst_obj = 0.0;
    std::uint64_t state = 20260810;
    auto rnd = [&state] {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state >> 11) * 0x1.0p-53;
    };
    for (int inst = 0; inst < 50; ++inst) {
        const int n_f = 2 + static_cast<int>(rnd() * 4); // 2..5
        const int m = 1 + static_cast<int>(rnd() * 2);   // 1..2
        if (m > n_f) continue;
        const double beta = 2.0 * rnd();
        const double ups = 0.1 + 0.9 * rnd();
        const auto lib = ContentLibrary::make(n_f, m, beta);
        auto params = table1(0.5);
        params.n_bar = 1.0 + 7.0 * rnd();

        const auto sol = opt::optimize_caching(params, lib, ups);
        const auto bf =
            oracle::brute_force_caching(lib.popularity, m, params.n_bar, ups, 60000, 0.08);
        for (size_t i = 0; i < sol.b_star.b.size(); ++i)
            worst_coord = std::max(worst_coord, std::abs(sol.b_star.b[i] - bf[i]));
        const double obj_gap =
            oracle::offloading_objective(lib.popularity, bf, params.n_bar, ups) - sol.objective;
        worst_obj = std::max(worst_obj, obj_gap); // oracle may not exceed the KKT value
        if (worst_coord > 1e-3 || worst_obj > 1e-6) pass = false;
    }
    const double secs = seconds_since(t0);
    if (secs > 120.0) pass = false;
    char detail[192];
    std::snprintf(detail, sizeof detail,
                  "50 instances: max coord gap %.2e (tol 1e-3), max objective shortfall %.2e "
                  "(tol 1e-6), %.1f s (limit 120)",
                  worst_coord, worst_obj, secs);
    report(6, "KKT oracle equivalence", pass, detail);
}

// ---------------------------------------------------------------------------
// 7. Laplace transforms vs Monte Carlo E[e^{-sI}]
double mc_laplace_inter(double s, const NetworkParams& params, long realizations,
                        std::uint64_t seed) {
    const double window = 600.0;
    double acc = 0.0;
    for (long t = 0; t < realizations; ++t) {
        sim::Rng rng(seed, static_cast<std::uint64_t>(t), 7001);
        const long parents = rng.poisson(params.lambda_p * M_PI * window * window);
        double interference = 0.0;
        for (long c = 0; c < parents; ++c) {
            const double radius = window * std::sqrt(rng.uniform());
            const double angle = 2.0 * M_PI * rng.uniform();
            const double cx = radius * std::cos(angle), cy = radius * std::sin(angle);
            const long members = rng.poisson(params.n_bar);
            for (long j = 0; j < members; ++j) {
                auto [dx, dy] = rng.gaussian_pair(params.sigma);
                if (!rng.bernoulli(params.q)) continue;
                const double d2 = (cx + dx) * (cx + dx) + (cy + dy) * (cy + dy);
                interference += rng.exponential() * std::pow(d2, -0.5 * params.alpha);
            }
        }
        acc += std::exp(-s * interference);
    }
    return acc / static_cast<double>(realizations);
}

double mc_laplace_intra(double s, const NetworkParams& params, long realizations,
                        std::uint64_t seed) {
    double acc = 0.0;
    for (long t = 0; t < realizations; ++t) {
        sim::Rng rng(seed, static_cast<std::uint64_t>(t), 7002);
        auto [tx, ty] = rng.gaussian_pair(params.sigma); // typical device offset
        const long members = rng.poisson(params.n_bar);
        double interference = 0.0;
        for (long j = 0; j < members; ++j) {
            auto [dx, dy] = rng.gaussian_pair(params.sigma);
            if (!rng.bernoulli(params.q)) continue;
            const double d2 = (dx - tx) * (dx - tx) + (dy - ty) * (dy - ty);
            interference += rng.exponential() * std::pow(d2, -0.5 * params.alpha);
        }
        acc += std::exp(-s * interference);
    }
    return acc / static_cast<double>(realizations);
}

void criterion7() {
    bool pass = true;
    double worst_inter = 0.0, worst_intra = 0.0;
    for (const auto& ref : oracle::kLaplaceRef) {
        const auto params = table1(ref.q);
        const double ana_inter = analytics::laplace_inter({ref.s}, params);
        const double ana_intra = analytics::laplace_intra({ref.s}, params);
        const double mc_inter = mc_laplace_inter(ref.s, params, 200000, 424242);
        const double mc_intra = mc_laplace_intra(ref.s, params, 1000000, 434343);
        const double rel_inter = std::abs(ana_inter - mc_inter) / mc_inter;
        const double rel_intra = std::abs(ana_intra - mc_intra) / mc_intra;
        worst_inter = std::max(worst_inter, rel_inter);
        worst_intra = std::max(worst_intra, rel_intra);
        if (rel_inter > 0.02 || rel_intra > 0.03) pass = false;
    }
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "5 (s,q) pairs: max inter rel err %.4f (tol 0.02), max intra rel err %.4f "
                  "(tol 0.03)",
                  worst_inter, worst_intra);
    report(7, "Laplace transform Monte Carlo oracle", pass, detail);
}

// ---------------------------------------------------------------------------
// 8. Closed-form cross-checks
void criterion8() {
    bool pass = true;
    const auto params = table1(0.5);
    const double hand = 1.0 / (1.0 + 2e-3 * M_PI * M_PI); // 4 sigma^2 pi lambda (pi/2)
    const double cf = analytics::closed_form_single_link_coverage(params);
    const double rel = std::abs(cf - hand) / hand;
    if (rel > 1e-12) pass = false;

    const auto lib = ContentLibrary::make(100, 8, 0.5);
    double worst_identity = 0.0;
    for (const auto& policy : {uniform_policy(lib), zipf_policy(lib)}) {
        const double direct = analytics::closed_form_offloading_gain(params, lib, policy);
        const double substituted = analytics::offloading_gain_given(lib, policy, params.n_bar, cf);
        worst_identity = std::max(worst_identity, std::abs(direct - substituted));
    }
    if (worst_identity > 1e-12) pass = false;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "single-link form vs hand evaluation rel err %.1e (tol 1e-12); gain identity "
                  "gap %.1e (tol 1e-12)",
                  rel, worst_identity);
    report(8, "closed-form cross-check", pass, detail);
}

// ---------------------------------------------------------------------------
// 9. Named property-suite spot checks (full suites live in the unit tests)
void criterion9() {
    bool pass = true;
    std::string failed;

    // policy budget exactness
    for (double beta : {0.0, 0.5, 1.0}) {
        const auto lib = ContentLibrary::make(100, 8, beta);
        for (const auto& pol : {zipf_policy(lib), uniform_policy(lib)}) {
            long double sum = 0.0L;
            for (double b : pol.b) sum += b;
            if (std::abs(static_cast<double>(sum) - 8.0) > 1e-9) {
                pass = false;
                failed += " budget";
            }
        }
    }
    {
        const auto lib = ContentLibrary::make(100, 8, 1.0);
        const auto sol = opt::optimize_caching(table1(0.5), lib, 0.3);
        long double sum = 0.0L;
        for (double b : sol.b_star.b) sum += b;
        if (std::abs(static_cast<double>(sum) - 8.0) > 1e-9) {
            pass = false;
            failed += " kkt-budget";
        }
    }

    // Rice/Rayleigh normalization
    for (double v : {0.0, 10.0, 500.0}) {
        const auto res = numerics::integrate_semi_infinite(
            [v](double u) { return numerics::rice_pdf(u, v, 10.0); }, {}, v + 10.0);
        if (!res.converged || std::abs(res.value - 1.0) > 1e-8) {
            pass = false;
            failed += " rice-norm";
        }
    }

    // transmit-power invariance
    {
        auto lo = table1(0.5);
        lo.p_d = 1e-3;
        auto hi = table1(0.5);
        hi.p_d = 1e3;
        if (std::abs(analytics::rate_coverage(lo).value - analytics::rate_coverage(hi).value) >
            1e-12) {
            pass = false;
            failed += " p_d";
        }
    }

    // seed determinism
    {
        const auto lib = ContentLibrary::make(100, 8, 0.5);
        sim::SimulationConfig cfg;
        cfg.trials = 4000;
        cfg.seed = 4242;
        cfg.workers = 1;
        const auto a = sim::estimate(table1(0.5), lib, uniform_policy(lib), cfg);
        cfg.workers = 5;
        const auto b = sim::estimate(table1(0.5), lib, uniform_policy(lib), cfg);
        if (a.p_o_hat != b.p_o_hat || a.upsilon_hat != b.upsilon_hat) {
            pass = false;
            failed += " determinism";
        }
    }

    report(9, "property suite spot checks", pass,
           pass ? "budget 1e-9, rice normalization 1e-8, power invariance 1e-12, bit-exact seeds"
                : ("failing:" + failed));
}

} // namespace

int main() {
    const auto t0 = Clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::printf("%d/9 criteria passed in %.0f s\n", 9 - g_failures, seconds_since(t0));
    return g_failures;
}
