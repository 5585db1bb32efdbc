#pragma once

#include <functional>

namespace cachesim::numerics {

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 2048;

    void validate() const; // throws std::invalid_argument
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

// exp(-|x|) * I0(x). Power series below x = 18, asymptotic expansion above;
// both branches are accurate to full double precision, so rice_pdf stays
// finite and correct up to arguments uv/sigma^2 ~ 1e6 and far beyond.
double bessel_i0e(double x);

// (r/scale^2) exp(-r^2 / (2 scale^2)). The serving-distance density uses
// scale = sqrt(2) * sigma.
double rayleigh_pdf(double r, double scale);

// Distance density from a point at range v to a Gaussian-displaced point of
// std dev sigma. Evaluated as (u/sigma^2) exp(-(u-v)^2/(2 sigma^2)) i0e(uv/sigma^2)
// so the Bessel growth and the Gaussian decay cancel analytically.
double rice_pdf(double u, double v, double sigma);

// Gamma function; rejects poles (x a nonpositive integer).
double gamma_fn(double x);

// Globally adaptive Gauss-Kronrod 7-15 on [a, b]. Worst interval is split
// first; the refinement sequence does not depend on the tolerances, so
// tightening rel_tol never increases the error estimate.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec = {});

// Integral over [0, inf) via the map u = scale * t / (1 - t) onto (0, 1).
// scale conditions the map; pick it near the integrand's mass. Non-convergence
// is reported through QuadratureResult::converged, never silently dropped.
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         const QuadratureSpec& spec = {}, double scale = 1.0);

} // namespace cachesim::numerics
