#include "cachesim/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cachesim/errors.hpp"

namespace cachesim::analytics {

namespace {

using numerics::QuadratureResult;

void require_converged(const QuadratureResult& res, const char* where) {
    if (!res.converged) {
        std::ostringstream os;
        os << where << ": quadrature did not converge (error estimate " << res.error_estimate
           << " after " << res.subdivisions << " subdivisions)";
        throw NumericsError(os.str());
    }
}

} // namespace

double phi_kernel(double s, double v, const NetworkParams& params, const AnalyticsOptions& opt) {
    if (s <= 0.0) return 0.0;
    const double sigma = params.sigma;
    const double alpha = params.alpha;
    // The Rice density carries all the mass; 12 sigma on each side of v leaves
    // a tail below e^{-72}, far under the absolute tolerance.
    const double lo = std::max(0.0, v - 12.0 * sigma);
    const double hi = v + 12.0 * sigma;
    auto integrand = [&](double u) {
        return s / (s + std::pow(u, alpha)) * numerics::rice_pdf(u, v, sigma);
    };
    QuadratureResult res = numerics::integrate(integrand, lo, hi, opt.inner);
    require_converged(res, "phi_kernel");
    return res.value;
}

double laplace_inter(LaplaceArg arg, const NetworkParams& params, const AnalyticsOptions& opt) {
    params.validate();
    if (arg.s < 0.0) throw std::invalid_argument("laplace_inter: s must be >= 0");
    if (arg.s == 0.0 || params.q == 0.0) return 1.0;
    const double qn = params.q * params.n_bar;
    auto integrand = [&](double v) {
        const double ph = phi_kernel(arg.s, v, params, opt);
        return -std::expm1(-qn * ph) * v;
    };
    // Map scale near the integrand's mass: the kernel transitions around
    // s^{1/alpha} and the Rice spread adds ~sigma.
    const double scale = std::pow(arg.s, 1.0 / params.alpha) + params.sigma;
    QuadratureResult res = numerics::integrate_semi_infinite(integrand, opt.middle, scale);
    require_converged(res, "laplace_inter");
    return std::exp(-2.0 * M_PI * params.lambda_p * res.value);
}

double laplace_intra(LaplaceArg arg, const NetworkParams& params, const AnalyticsOptions& opt) {
    params.validate();
    if (arg.s < 0.0) throw std::invalid_argument("laplace_intra: s must be >= 0");
    if (arg.s == 0.0 || params.q == 0.0) return 1.0;
    const double scale = std::sqrt(2.0) * params.sigma;
    auto integrand = [&](double h) {
        return arg.s / (arg.s + std::pow(h, params.alpha)) * numerics::rayleigh_pdf(h, scale);
    };
    // Rayleigh envelope: mass beyond 12 * scale is below e^{-72}.
    QuadratureResult res = numerics::integrate(integrand, 0.0, 12.0 * scale, opt.middle);
    require_converged(res, "laplace_intra");
    return std::exp(-params.q * params.n_bar * res.value);
}

double conditional_coverage(double r, const NetworkParams& params, const AnalyticsOptions& opt) {
    if (!(r > 0.0)) throw std::invalid_argument("conditional_coverage: r must be > 0");
    if (params.q == 0.0) return 0.0;
    const LaplaceArg s{params.theta * std::pow(r, params.alpha)};
    return params.q * laplace_inter(s, params, opt) * laplace_intra(s, params, opt);
}

CoverageResult rate_coverage(const NetworkParams& params, const AnalyticsOptions& opt) {
    params.validate();
    CoverageResult out;
    if (params.q == 0.0) return out;
    const double scale = std::sqrt(2.0) * params.sigma;
    auto integrand = [&](double r) {
        if (r <= 0.0) return 0.0;
        return numerics::rayleigh_pdf(r, scale) * conditional_coverage(r, params, opt);
    };
    QuadratureResult res = numerics::integrate(integrand, 0.0, 12.0 * scale, opt.outer);
    require_converged(res, "rate_coverage");
    const double raw = res.value;
    if (raw < -1e-9 || raw > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "rate_coverage: raw probability " << raw << " outside [0, 1]; quadrature failure";
        throw NumericsError(os.str());
    }
    out.value = std::clamp(raw, 0.0, 1.0);
    // The inner levels are converged to their own tolerances, which perturb the
    // outer integrand pointwise; fold those budgets into the reported bound.
    out.error_estimate = res.error_estimate + opt.middle.rel_tol + opt.inner.rel_tol;
    return out;
}

double offloading_gain_given(const ContentLibrary& lib, const CachingPolicy& policy,
                             double n_bar, double upsilon) {
    lib.validate();
    if (policy.b.size() != lib.popularity.size())
        throw std::invalid_argument("offloading_gain: policy length != library n_f");
    if (!(upsilon >= 0.0 && upsilon <= 1.0))
        throw std::invalid_argument("offloading_gain: upsilon must be in [0, 1]");
    long double total = 0.0L;
    for (size_t i = 0; i < policy.b.size(); ++i) {
        const double p = lib.popularity[i];
        const double b = policy.b[i];
        const double hit = -std::expm1(-b * n_bar); // 1 - e^{-b nbar}
        total += p * b + p * (1.0 - b) * hit * upsilon;
    }
    return static_cast<double>(total);
}

double offloading_gain(const NetworkParams& params, const ContentLibrary& lib,
                       const CachingPolicy& policy, const AnalyticsOptions& opt) {
    const CoverageResult ups = rate_coverage(params, opt);
    return offloading_gain_given(lib, policy, params.n_bar, ups.value);
}

double closed_form_single_link_coverage(const NetworkParams& params) {
    params.validate();
    const double a = params.alpha;
    const double gamma_term = numerics::gamma_fn(1.0 + 2.0 / a) * numerics::gamma_fn(1.0 - 2.0 / a);
    const double denom = 4.0 * params.sigma * params.sigma * M_PI * params.lambda_p *
                             std::pow(params.theta, 2.0 / a) * gamma_term +
                         1.0;
    return 1.0 / denom;
}

double closed_form_offloading_gain(const NetworkParams& params, const ContentLibrary& lib,
                                   const CachingPolicy& policy) {
    return offloading_gain_given(lib, policy, params.n_bar,
                                 closed_form_single_link_coverage(params));
}

} // namespace cachesim::analytics
