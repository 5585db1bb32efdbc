#pragma once

#include <utility>

#include "cachesim/analytics.hpp"
#include "cachesim/model.hpp"

namespace cachesim::opt {

struct AccessSearchResult {
    double q_star = 0.0;
    double upsilon_star = 0.0;
    int iterations = 0;     // bisection steps after the grid scan
    bool unimodal = true;   // false when the coarse grid showed multiple peaks
};

struct CachingSolution {
    CachingPolicy b_star;
    double v_star = 0.0;    // dual multiplier of the cache-size constraint
    double objective = 0.0; // offloading gain at the returned policy
    int outer_iterations = 0;
};

// Maximize the rate coverage over q in [0, 1]: 21-point grid scan, then
// bisection on the sign of a central finite-difference derivative around the
// grid argmax. A non-unimodal grid falls back to local grid refinement.
AccessSearchResult optimize_access(const NetworkParams& params, double search_tol = 1e-4,
                                   const analytics::AnalyticsOptions& opt = {});

// d P_o / d b_i = p_i + p_i upsilon (nbar (1-b_i) e^{-nbar b_i} - (1 - e^{-nbar b_i})).
// Strictly decreasing in b_i whenever upsilon > 0.
double caching_derivative(double b_i, double p_i, double n_bar, double upsilon);

// Piecewise KKT solution: outer bisection on the dual v over
// [0, max_i p_i (1 + nbar upsilon)], per-file inner bisection for interior roots.
// The budget |sum b - m| <= tol at return (1e-9 by default).
CachingSolution optimize_caching(const NetworkParams& params, const ContentLibrary& lib,
                                 double upsilon, double tol = 1e-9);

// Two-stage decomposition: q* from optimize_access, then b*(Upsilon(q*)).
std::pair<AccessSearchResult, CachingSolution> solve_joint(
    const NetworkParams& params, const ContentLibrary& lib, double search_tol = 1e-4,
    const analytics::AnalyticsOptions& opt = {});

} // namespace cachesim::opt
