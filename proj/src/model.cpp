#include "cachesim/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cachesim {

namespace units {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
double per_km2_to_per_m2(double per_km2) { return per_km2 * 1e-6; }
double per_m2_to_per_km2(double per_m2) { return per_m2 * 1e6; }

} // namespace units

namespace {

[[noreturn]] void fail(const std::string& field, double value, const char* constraint) {
    std::ostringstream os;
    os << "NetworkParams." << field << " = " << value << " violates " << constraint;
    throw std::invalid_argument(os.str());
}

} // namespace

void NetworkParams::validate() const {
    if (!(lambda_p > 0.0)) fail("lambda_p", lambda_p, "lambda_p > 0");
    if (!(n_bar > 0.0)) fail("n_bar", n_bar, "n_bar > 0");
    if (!(sigma > 0.0)) fail("sigma", sigma, "sigma > 0");
    if (!(alpha > 2.0)) fail("alpha", alpha, "alpha > 2 (interference integrals diverge otherwise)");
    if (!(theta > 0.0)) fail("theta", theta, "theta > 0");
    if (!(p_d > 0.0)) fail("p_d", p_d, "p_d > 0");
    if (!(q >= 0.0 && q <= 1.0)) fail("q", q, "0 <= q <= 1");
}

std::vector<double> zipf_popularity(int n_f, double beta) {
    if (n_f < 1) throw std::invalid_argument("zipf_popularity: n_f must be >= 1");
    if (beta < 0.0) throw std::invalid_argument("zipf_popularity: beta must be >= 0");
    std::vector<double> p(static_cast<size_t>(n_f));
    // Sum smallest terms first in extended precision so the normalizer is
    // accurate to ~1e-14 even at n_f = 1e5, beta = 3.
    long double norm = 0.0L;
    for (int i = n_f; i >= 1; --i) norm += std::pow(static_cast<long double>(i), -static_cast<long double>(beta));
    for (int i = 1; i <= n_f; ++i)
        p[static_cast<size_t>(i - 1)] = static_cast<double>(
            std::pow(static_cast<long double>(i), -static_cast<long double>(beta)) / norm);
    return p;
}

ContentLibrary ContentLibrary::make(int n_f, int m, double beta) {
    ContentLibrary lib;
    lib.n_f = n_f;
    lib.m = m;
    lib.beta = beta;
    lib.popularity = zipf_popularity(n_f, beta);
    lib.validate();
    return lib;
}

void ContentLibrary::validate() const {
    if (n_f < 1) throw std::invalid_argument("ContentLibrary.n_f must be >= 1");
    if (m < 1) throw std::invalid_argument("ContentLibrary.m must be >= 1");
    if (m > n_f) throw std::invalid_argument("ContentLibrary.m must be <= n_f");
    if (beta < 0.0) throw std::invalid_argument("ContentLibrary.beta must be >= 0");
    if (popularity.size() != static_cast<size_t>(n_f))
        throw std::invalid_argument("ContentLibrary.popularity length != n_f");
    long double sum = 0.0L;
    for (double p : popularity) sum += p;
    if (std::abs(static_cast<double>(sum) - 1.0) > 1e-12)
        throw std::invalid_argument("ContentLibrary.popularity does not sum to 1");
    for (size_t i = 1; i < popularity.size(); ++i)
        if (popularity[i] > popularity[i - 1])
            throw std::invalid_argument("ContentLibrary.popularity is not nonincreasing");
}

CachingPolicy uniform_policy(const ContentLibrary& lib) {
    lib.validate();
    CachingPolicy pol;
    pol.b.assign(static_cast<size_t>(lib.n_f), static_cast<double>(lib.m) / lib.n_f);
    return pol;
}

CachingPolicy zipf_policy(const ContentLibrary& lib) {
    lib.validate();
    const auto& p = lib.popularity;
    const size_t n = p.size();
    CachingPolicy pol;
    pol.b.assign(n, 0.0);
    std::vector<bool> capped(n, false);
    double budget = lib.m;
    // Each round caps at least one file or leaves all below 1, so this
    // terminates in at most n_f rounds.
    for (size_t round = 0; round < n + 1; ++round) {
        long double mass = 0.0L;
        for (size_t i = 0; i < n; ++i)
            if (!capped[i]) mass += p[i];
        if (mass <= 0.0L) break;
        const double t = budget / static_cast<double>(mass);
        bool newly_capped = false;
        for (size_t i = 0; i < n; ++i) {
            if (capped[i]) continue;
            const double bi = t * p[i];
            if (bi >= 1.0) {
                capped[i] = true;
                pol.b[i] = 1.0;
                budget -= 1.0;
                newly_capped = true;
            } else {
                pol.b[i] = bi;
            }
        }
        if (!newly_capped) break;
    }
    return pol;
}

std::optional<PolicyViolation> validate_policy(const CachingPolicy& policy,
                                               const ContentLibrary& lib) {
    if (policy.b.size() != static_cast<size_t>(lib.n_f)) {
        return PolicyViolation{PolicyViolation::Kind::length_mismatch, -1,
                               static_cast<double>(policy.b.size()),
                               "policy length " + std::to_string(policy.b.size()) +
                                   " != library n_f " + std::to_string(lib.n_f)};
    }
    for (size_t i = 0; i < policy.b.size(); ++i) {
        const double bi = policy.b[i];
        if (!(bi >= -1e-12 && bi <= 1.0 + 1e-12)) {
            std::ostringstream os;
            os << "b[" << i << "] = " << bi << " outside [0, 1]";
            return PolicyViolation{PolicyViolation::Kind::range, static_cast<int>(i), bi, os.str()};
        }
    }
    long double sum = 0.0L;
    for (double bi : policy.b) sum += bi;
    const double s = static_cast<double>(sum);
    if (std::abs(s - lib.m) > 1e-9) {
        std::ostringstream os;
        os << "sum b = " << s << " != cache budget m = " << lib.m;
        return PolicyViolation{PolicyViolation::Kind::budget, -1, s, os.str()};
    }
    return std::nullopt;
}

} // namespace cachesim
