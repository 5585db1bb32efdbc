#include "cachesim/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cachesim/errors.hpp"

namespace cachesim::opt {

namespace {

double upsilon_at(const NetworkParams& params, double q, const analytics::AnalyticsOptions& opt) {
    NetworkParams p = params;
    p.q = std::clamp(q, 0.0, 1.0);
    return analytics::rate_coverage(p, opt).value;
}

} // namespace

AccessSearchResult optimize_access(const NetworkParams& params, double search_tol,
                                   const analytics::AnalyticsOptions& opt) {
    params.validate();
    if (!(search_tol > 0.0)) throw std::invalid_argument("optimize_access: search_tol must be > 0");
    constexpr int kGridPoints = 21;
    constexpr int kMaxBisections = 60;
    constexpr double kDiffStep = 1e-4;

    std::vector<double> qs(kGridPoints), ups(kGridPoints);
    for (int i = 0; i < kGridPoints; ++i) {
        qs[i] = static_cast<double>(i) / (kGridPoints - 1);
        ups[i] = upsilon_at(params, qs[i], opt);
    }
    int k = 0;
    for (int i = 1; i < kGridPoints; ++i)
        if (ups[i] > ups[k]) k = i;

    // Unimodal pattern on the grid: no second local maximum beyond noise level.
    int peaks = 0;
    for (int i = 0; i < kGridPoints; ++i) {
        const bool up_ok = (i == 0) || ups[i] >= ups[i - 1] - 1e-12;
        const bool down_ok = (i == kGridPoints - 1) || ups[i] >= ups[i + 1] - 1e-12;
        if (up_ok && down_ok && ups[k] - ups[i] < 1e-6) ++peaks;
    }
    const bool unimodal = [&] {
        // Rising then falling around the argmax; tolerate flat stretches.
        for (int i = 1; i <= k; ++i)
            if (ups[i] < ups[i - 1] - 1e-9) return false;
        for (int i = k + 1; i < kGridPoints; ++i)
            if (ups[i] > ups[i - 1] + 1e-9) return false;
        return true;
    }();
    (void)peaks;

    AccessSearchResult out;
    out.unimodal = unimodal;

    auto derivative = [&](double q) {
        const double hi = std::min(1.0, q + kDiffStep);
        const double lo = std::max(0.0, q - kDiffStep);
        return (upsilon_at(params, hi, opt) - upsilon_at(params, lo, opt)) / (hi - lo);
    };

    if (!unimodal) {
        // Refine around the grid argmax with two shrinking local grids and
        // report the best point found.
        double center = qs[k], best_q = qs[k], best_u = ups[k];
        double width = 2.0 / (kGridPoints - 1);
        for (int round = 0; round < 2; ++round) {
            const double lo = std::max(0.0, center - width / 2);
            const double hi = std::min(1.0, center + width / 2);
            for (int i = 0; i < kGridPoints; ++i) {
                const double q = lo + (hi - lo) * i / (kGridPoints - 1);
                const double u = upsilon_at(params, q, opt);
                ++out.iterations;
                if (u > best_u) { best_u = u; best_q = q; }
            }
            center = best_q;
            width /= 10.0;
        }
        out.q_star = best_q;
        out.upsilon_star = best_u;
        return out;
    }

    double lo, hi;
    if (k == 0) {
        if (derivative(kDiffStep) <= 0.0) {
            out.q_star = 0.0;
            out.upsilon_star = ups[0];
            return out;
        }
        lo = 0.0; hi = qs[1];
    } else if (k == kGridPoints - 1) {
        if (derivative(1.0 - kDiffStep) >= 0.0) {
            out.q_star = 1.0;
            out.upsilon_star = ups[kGridPoints - 1];
            return out;
        }
        lo = qs[kGridPoints - 2]; hi = 1.0;
    } else {
        lo = qs[k - 1]; hi = qs[k + 1];
    }

    while (hi - lo > search_tol && out.iterations < kMaxBisections) {
        const double mid = 0.5 * (lo + hi);
        if (derivative(mid) > 0.0) lo = mid; else hi = mid;
        ++out.iterations;
    }
    out.q_star = 0.5 * (lo + hi);
    out.upsilon_star = upsilon_at(params, out.q_star, opt);
    if (hi - lo > search_tol) {
        // best-so-far is still returned; callers decide whether to retry
        out.unimodal = unimodal;
    }
    return out;
}

double caching_derivative(double b_i, double p_i, double n_bar, double upsilon) {
    const double hit = -std::expm1(-n_bar * b_i); // 1 - e^{-nbar b}
    return p_i + p_i * upsilon * (n_bar * (1.0 - b_i) * std::exp(-n_bar * b_i) - hit);
}

namespace {

// Piecewise threshold map b_i(v): 1 below the lower threshold, 0 above the
// upper one, otherwise the unique root of caching_derivative(b) = v.
double b_of_dual(double v, double p_i, double n_bar, double upsilon) {
    const double lower = p_i - p_i * (-std::expm1(-n_bar)) * upsilon;
    const double upper = p_i + n_bar * p_i * upsilon;
    if (v < lower) return 1.0;
    if (v > upper) return 0.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (caching_derivative(mid, p_i, n_bar, upsilon) > v) lo = mid; else hi = mid;
        if (hi - lo < 1e-12) break;
    }
    return 0.5 * (lo + hi);
}

double budget_sum(const std::vector<double>& b) {
    long double s = 0.0L;
    for (double x : b) s += x;
    return static_cast<double>(s);
}

} // namespace

CachingSolution optimize_caching(const NetworkParams& params, const ContentLibrary& lib,
                                 double upsilon, double tol) {
    lib.validate();
    if (!(upsilon >= 0.0 && upsilon <= 1.0))
        throw std::invalid_argument("optimize_caching: upsilon must be in [0, 1]");
    if (!(tol > 0.0)) throw std::invalid_argument("optimize_caching: tol must be > 0");
    const double n_bar = params.n_bar;
    const auto& p = lib.popularity;
    const size_t n = p.size();
    const double m = lib.m;

    CachingSolution sol;
    if (lib.m == lib.n_f) { // budget saturates every file
        sol.b_star.b.assign(n, 1.0);
        sol.v_star = 0.0;
        sol.objective = analytics::offloading_gain_given(lib, sol.b_star, n_bar, upsilon);
        return sol;
    }

    double v_hi = 0.0;
    for (double pi : p) v_hi = std::max(v_hi, pi * (1.0 + n_bar * upsilon));
    v_hi *= 1.0 + 1e-12;
    double v_lo = 0.0; // everything cached: sum = n_f >= m

    auto fill = [&](double v, std::vector<double>& b) {
        b.resize(n);
        for (size_t i = 0; i < n; ++i) b[i] = b_of_dual(v, p[i], n_bar, upsilon);
        return budget_sum(b);
    };

    std::vector<double> b_lo, b_hi, b_mid;
    double s_lo = fill(v_lo, b_lo);   // = n_f
    double s_hi = fill(v_hi, b_hi);   // = 0
    int iters = 0;
    while (iters < 200) {
        const double v_mid = 0.5 * (v_lo + v_hi);
        const double s_mid = fill(v_mid, b_mid);
        ++iters;
        if (std::abs(s_mid - m) <= tol) {
            sol.b_star.b = b_mid;
            sol.v_star = v_mid;
            sol.outer_iterations = iters;
            sol.objective = analytics::offloading_gain_given(lib, sol.b_star, n_bar, upsilon);
            return sol;
        }
        if (s_mid > m) { v_lo = v_mid; s_lo = s_mid; b_lo = b_mid; }
        else           { v_hi = v_mid; s_hi = s_mid; b_hi = b_mid; }
        if (v_hi - v_lo < 1e-15 * std::max(1.0, v_hi)) break;
    }

    // The sum jumped across m without landing inside tol: tied thresholds
    // (e.g. upsilon = 0 with equal popularities) make sum b(v) discontinuous.
    // The objective is flat across the tie, so any split of the residual
    // budget between the bracket policies is optimal; interpolate linearly.
    if (!(s_lo >= m && m >= s_hi))
        throw NumericsError("optimize_caching: dual bracket lost the budget (internal error)");
    const double lam = (s_lo - s_hi) > 0.0 ? (m - s_hi) / (s_lo - s_hi) : 0.0;
    sol.b_star.b.resize(n);
    for (size_t i = 0; i < n; ++i)
        sol.b_star.b[i] = std::clamp(b_hi[i] + lam * (b_lo[i] - b_hi[i]), 0.0, 1.0);
    sol.v_star = 0.5 * (v_lo + v_hi);
    sol.outer_iterations = iters;
    sol.objective = analytics::offloading_gain_given(lib, sol.b_star, n_bar, upsilon);
    return sol;
}

std::pair<AccessSearchResult, CachingSolution> solve_joint(const NetworkParams& params,
                                                           const ContentLibrary& lib,
                                                           double search_tol,
                                                           const analytics::AnalyticsOptions& opt) {
    AccessSearchResult access = optimize_access(params, search_tol, opt);
    NetworkParams at_star = params;
    at_star.q = access.q_star;
    CachingSolution caching = optimize_caching(at_star, lib, access.upsilon_star);
    return {access, caching};
}

} // namespace cachesim::opt
