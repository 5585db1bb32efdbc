#pragma once

#include "cachesim/model.hpp"
#include "cachesim/numerics.hpp"

namespace cachesim::analytics {

// Laplace variable after transmit-power cancellation: s = theta * r^alpha,
// in m^alpha. Power appears symmetrically in signal and interference and the
// model carries no noise term, so p_d drops out of every coverage expression.
struct LaplaceArg {
    double s = 0.0;
};

struct CoverageResult {
    double value = 0.0;          // probability in [0, 1]
    double error_estimate = 0.0; // conservative absolute bound from the quadratures
};

// Quadrature budgets for the three nesting levels of the coverage integral:
// outer r, middle v (inter-cluster distance), inner u (Rice-weighted kernel).
struct AnalyticsOptions {
    numerics::QuadratureSpec outer{1e-7, 1e-11, 256};
    numerics::QuadratureSpec middle{1e-8, 1e-12, 1024};
    numerics::QuadratureSpec inner{1e-8, 1e-13, 256};
};

// E_U[s / (s + U^alpha)] with U ~ Rice(v, sigma); the inner kernel of the
// inter-cluster Laplace transform.
double phi_kernel(double s, double v, const NetworkParams& params,
                  const AnalyticsOptions& opt = {});

// exp(-2 pi lambda_p Int_0^inf (1 - e^{-q nbar phi(s,v)}) v dv)
double laplace_inter(LaplaceArg s, const NetworkParams& params,
                     const AnalyticsOptions& opt = {});

// exp(-q nbar Int_0^inf s/(s+h^alpha) f_H(h) dh), f_H Rayleigh(sqrt(2) sigma).
// The intra-cluster distances are treated as independent here, which is an
// approximation; the simulator is the exact reference.
double laplace_intra(LaplaceArg s, const NetworkParams& params,
                     const AnalyticsOptions& opt = {});

// q * L_inter(s) * L_intra(s) with s = theta * r^alpha.
double conditional_coverage(double r, const NetworkParams& params,
                            const AnalyticsOptions& opt = {});

// Int_0^inf f_R(r) * conditional_coverage(r) dr, f_R Rayleigh(sqrt(2) sigma).
// Raw values outside [-1e-9, 1+1e-9] indicate quadrature failure and throw
// NumericsError; anything inside is clamped to [0, 1].
CoverageResult rate_coverage(const NetworkParams& params, const AnalyticsOptions& opt = {});

// sum_i p_i b_i + p_i (1 - b_i)(1 - e^{-b_i nbar}) * upsilon
double offloading_gain_given(const ContentLibrary& lib, const CachingPolicy& policy,
                             double n_bar, double upsilon);

// Same, computing upsilon = rate_coverage(params) once and reusing it.
double offloading_gain(const NetworkParams& params, const ContentLibrary& lib,
                       const CachingPolicy& policy, const AnalyticsOptions& opt = {});

// Single-active-link special case:
// 1 / (4 sigma^2 pi lambda_p theta^{2/alpha} Gamma(1+2/alpha) Gamma(1-2/alpha) + 1)
double closed_form_single_link_coverage(const NetworkParams& params);

// Offloading gain with the closed-form coverage substituted.
double closed_form_offloading_gain(const NetworkParams& params, const ContentLibrary& lib,
                                   const CachingPolicy& policy);

} // namespace cachesim::analytics
