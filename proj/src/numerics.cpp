#include "cachesim/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace cachesim::numerics {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadratureSpec.rel_tol must be > 0");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadratureSpec.abs_tol must be > 0");
    if (max_subdivisions < 1) throw std::invalid_argument("QuadratureSpec.max_subdivisions must be >= 1");
}

double bessel_i0e(double x) {
    x = std::abs(x);
    if (x < 18.0) {
        // I0(x) = sum_k (x^2/4)^k / (k!)^2; at most ~40 terms are needed here.
        const double y = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 80; ++k) {
            term *= y / (static_cast<double>(k) * k);
            sum += term;
            if (term < sum * 1e-18) break;
        }
        return std::exp(-x) * sum;
    }
    // i0e(x) ~ (2 pi x)^{-1/2} sum_k a_k / x^k with a_0 = 1,
    // a_k = a_{k-1} (2k-1)^2 / (8k). The series is asymptotic; truncating at
    // the smallest term gives ~e^{-2x} relative error, below 1e-15 for x >= 18.
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        const double next = term * ((2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
        if (next >= term) break; // series started diverging
        term = next;
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return sum / std::sqrt(2.0 * M_PI * x);
}

double rayleigh_pdf(double r, double scale) {
    if (r < 0.0) throw std::invalid_argument("rayleigh_pdf: r must be >= 0");
    if (!(scale > 0.0)) throw std::invalid_argument("rayleigh_pdf: scale must be > 0");
    const double z = r / scale;
    return (r / (scale * scale)) * std::exp(-0.5 * z * z);
}

double rice_pdf(double u, double v, double sigma) {
    if (u < 0.0) throw std::invalid_argument("rice_pdf: u must be >= 0");
    if (v < 0.0) throw std::invalid_argument("rice_pdf: v must be >= 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("rice_pdf: sigma must be > 0");
    const double s2 = sigma * sigma;
    const double d = (u - v) / sigma;
    return (u / s2) * std::exp(-0.5 * d * d) * bessel_i0e(u * v / s2);
}

double gamma_fn(double x) {
    if (x <= 0.0 && x == std::floor(x))
        throw std::invalid_argument("gamma_fn: pole at nonpositive integer");
    return std::tgamma(x);
}

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (positive half; symmetric).
// Even-index Kronrod abscissae coincide with the 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
    double integral;   // Kronrod estimate
    double error;      // practical error estimate (QUADPACK style)
};

template <typename F>
PanelResult kronrod_panel(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    fv[7] = f(center);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv[j] = f(center - dx);
        fv[14 - j] = f(center + dx);
    }

    double resk = kWgk[7] * fv[7];
    double resg = kWg[3] * fv[7];
    double resabs = kWgk[7] * std::abs(fv[7]);
    for (int j = 0; j < 7; ++j) {
        const double sum = fv[j] + fv[14 - j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fv[7] - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));

    PanelResult out;
    out.integral = resk * half;
    resasc *= std::abs(half);
    resabs *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double round_floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    out.error = std::max(err, round_floor);
    return out;
}

struct Interval {
    double a, b, integral, error;
    long order; // insertion counter for deterministic tie-breaking
};

struct WorstFirst {
    bool operator()(const Interval& x, const Interval& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.order > y.order;
    }
};

QuadratureResult adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec) {
    spec.validate();
    std::priority_queue<Interval, std::vector<Interval>, WorstFirst> heap;
    long counter = 0;

    PanelResult first = kronrod_panel(f, a, b);
    heap.push(Interval{a, b, first.integral, first.error, counter++});
    double total = first.integral;
    double total_err = first.error;
    int panels = 1;

    while (panels < spec.max_subdivisions) {
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
        if (total_err <= tol) break;
        Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) { // interval at double resolution
            heap.push(worst);
            break;
        }
        PanelResult left = kronrod_panel(f, worst.a, mid);
        PanelResult right = kronrod_panel(f, mid, worst.b);
        total += left.integral + right.integral - worst.integral;
        total_err += left.error + right.error - worst.error;
        heap.push(Interval{worst.a, mid, left.integral, left.error, counter++});
        heap.push(Interval{mid, worst.b, right.integral, right.error, counter++});
        ++panels;
    }

    // Re-sum leaves so the reported value does not carry incremental drift.
    double value = 0.0, err = 0.0;
    while (!heap.empty()) {
        value += heap.top().integral;
        err += heap.top().error;
        heap.pop();
    }
    QuadratureResult out;
    out.value = value;
    out.error_estimate = err;
    out.subdivisions = panels;
    out.converged = err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
    return out;
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec) {
    if (!(a < b)) throw std::invalid_argument("integrate: requires a < b");
    return adaptive(f, a, b, spec);
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         const QuadratureSpec& spec, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("integrate_semi_infinite: scale must be > 0");
    auto g = [&f, scale](double t) {
        const double om = 1.0 - t;
        if (om <= 0.0) return 0.0;
        const double u = scale * t / om;
        if (!std::isfinite(u)) return 0.0;
        const double fu = f(u);
        if (fu == 0.0) return 0.0;
        return fu * scale / (om * om);
    };
    return adaptive(g, 0.0, 1.0, spec);
}

} // namespace cachesim::numerics
