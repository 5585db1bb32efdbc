#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cachesim/analytics.hpp"
#include "cachesim/errors.hpp"
#include "oracles.hpp"

using namespace cachesim;
using namespace cachesim::analytics;

namespace {

NetworkParams table1(double q) {
    return NetworkParams{1e-5, 4.0, 10.0, 4.0, 1.0, 1.0, q};
}

} // namespace

TEST_CASE("laplace transforms: trivial limits") {
    const auto p = table1(0.5);
    CHECK(laplace_inter({0.0}, p) == 1.0);
    CHECK(laplace_intra({0.0}, p) == 1.0);
    const auto p0 = table1(0.0);
    CHECK(laplace_inter({1e4}, p0) == 1.0);
    CHECK(laplace_intra({1e4}, p0) == 1.0);
}

TEST_CASE("laplace transforms match the independent reference route") {
    for (const auto& ref : oracle::kLaplaceRef) {
        const auto p = table1(ref.q);
        CHECK(laplace_inter({ref.s}, p) == doctest::Approx(ref.inter).epsilon(3e-6));
        CHECK(laplace_intra({ref.s}, p) == doctest::Approx(ref.intra).epsilon(1e-6));
    }
}

TEST_CASE("laplace transforms: in (0,1], nonincreasing in s, q, n_bar, lambda_p") {
    auto p = table1(0.5);
    double prev_inter = 1.0, prev_intra = 1.0;
    for (double s : {0.0, 1e2, 1e4, 1e6}) {
        const double li = laplace_inter({s}, p);
        const double la = laplace_intra({s}, p);
        CHECK(li > 0.0);
        CHECK(li <= prev_inter + 1e-12);
        CHECK(la > 0.0);
        CHECK(la <= prev_intra + 1e-12);
        prev_inter = li;
        prev_intra = la;
    }
    prev_inter = prev_intra = 1.0;
    for (double q : {0.2, 0.5, 0.9}) {
        auto pq = table1(q);
        const double li = laplace_inter({1e4}, pq);
        const double la = laplace_intra({1e4}, pq);
        CHECK(li <= prev_inter);
        CHECK(la <= prev_intra);
        prev_inter = li;
        prev_intra = la;
    }
    prev_inter = prev_intra = 1.0;
    for (double n : {1.0, 4.0, 10.0}) {
        auto pn = table1(0.5);
        pn.n_bar = n;
        const double li = laplace_inter({1e4}, pn);
        const double la = laplace_intra({1e4}, pn);
        CHECK(li <= prev_inter);
        CHECK(la <= prev_intra);
        prev_inter = li;
        prev_intra = la;
    }
    prev_inter = 1.0;
    for (double lam : {1e-6, 1e-5, 1e-4}) {
        auto pl = table1(0.5);
        pl.lambda_p = lam;
        const double li = laplace_inter({1e4}, pl);
        CHECK(li <= prev_inter);
        prev_inter = li;
    }
}

TEST_CASE("conditional coverage: limits, bound and monotonicity") {
    CHECK(conditional_coverage(10.0, table1(0.0)) == 0.0);

    auto p1 = table1(1.0);
    CHECK(conditional_coverage(1e-3, p1) == doctest::Approx(1.0).epsilon(1e-6));

    const auto p = table1(0.5);
    double prev = 1.0;
    for (double r : {1.0, 5.0, 10.0, 20.0, 40.0, 80.0}) {
        const double c = conditional_coverage(r, p);
        CHECK(c <= p.q + 1e-12);
        CHECK(c <= prev + 1e-12);
        prev = c;
    }
    CHECK_THROWS_AS(conditional_coverage(0.0, p), std::invalid_argument);
}

TEST_CASE("rate coverage at the default geometry matches the reference route") {
    const auto res = rate_coverage(table1(0.5));
    CHECK(res.value == doctest::Approx(oracle::kUpsilonQ05).epsilon(2e-6));
    CHECK(res.error_estimate < 1e-6);
    CHECK(rate_coverage(table1(0.0)).value == 0.0);
}

TEST_CASE("rate coverage matches the reference route across the (q, sigma) grid") {
    for (const auto& ref : oracle::kUpsilonTable1) {
        auto p = table1(ref.q);
        p.sigma = ref.sigma;
        CHECK(rate_coverage(p).value == doctest::Approx(ref.upsilon).epsilon(1e-5));
    }
}

TEST_CASE("rate coverage decreases with sigma") {
    // three-point slice of the full acceptance grid, n_bar = 5, q = 0.3
    NetworkParams p{1e-5, 5.0, 5.0, 4.0, 1.0, 1.0, 0.3};
    double prev = 1.0;
    for (double sigma : {5.0, 15.0, 30.0}) {
        p.sigma = sigma;
        const double u = rate_coverage(p).value;
        CHECK(u < prev);
        prev = u;
    }
}

TEST_CASE("interference-free limit: coverage approaches q") {
    NetworkParams p{1e-12, 1e-9, 10.0, 4.0, 1.0, 1.0, 0.3};
    CHECK(rate_coverage(p).value == doctest::Approx(0.3).epsilon(1e-4 / 0.3));
}

TEST_CASE("rate coverage is invariant to transmit power") {
    auto p = table1(0.5);
    p.p_d = 1e-3;
    const double lo = rate_coverage(p).value;
    p.p_d = 1e3;
    const double hi = rate_coverage(p).value;
    CHECK(lo == doctest::Approx(hi).epsilon(1e-12));
}

TEST_CASE("offloading gain: closed cases and reference value") {
    const auto p = table1(0.5);
    const auto lib_full = ContentLibrary::make(20, 20, 0.7);
    CachingPolicy ones;
    ones.b.assign(20, 1.0);
    CHECK(offloading_gain_given(lib_full, ones, p.n_bar, 0.37) ==
          doctest::Approx(1.0).epsilon(1e-12));

    const auto lib = ContentLibrary::make(100, 8, 0.5);
    CachingPolicy zeros;
    zeros.b.assign(100, 0.0);
    CHECK(offloading_gain_given(lib, zeros, p.n_bar, 0.5) == 0.0);

    CHECK(offloading_gain(p, lib, uniform_policy(lib)) ==
          doctest::Approx(oracle::kPoUniformQ05).epsilon(1e-5));
}

TEST_CASE("offloading gain is concave along coordinates") {
    const auto lib = ContentLibrary::make(30, 5, 0.8);
    const double n_bar = 4.0, ups = 0.4, h = 1e-4;
    std::vector<double> b(30);
    std::uint64_t state = 99;
    for (auto& bi : b) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        bi = 0.1 + 0.8 * static_cast<double>(state >> 11) * 0x1.0p-53;
    }
    for (int i : {0, 7, 19, 29}) {
        auto up = b, down = b;
        up[static_cast<size_t>(i)] += h;
        down[static_cast<size_t>(i)] -= h;
        CachingPolicy pb{b}, pu{up}, pd{down};
        const double second = offloading_gain_given(lib, pu, n_bar, ups) -
                              2.0 * offloading_gain_given(lib, pb, n_bar, ups) +
                              offloading_gain_given(lib, pd, n_bar, ups);
        CHECK(second <= 1e-12);
    }
}

TEST_CASE("closed-form single-link coverage: hand evaluation to 12 digits") {
    const auto p = table1(0.5);
    // alpha = 4: Gamma(1.5) Gamma(0.5) = pi/2, denominator 1 + 4 sigma^2 pi
    // lambda_p (pi/2) = 1 + 2e-3 pi^2
    const double hand = 1.0 / (1.0 + 2e-3 * M_PI * M_PI);
    const double cf = closed_form_single_link_coverage(p);
    CHECK(cf == doctest::Approx(hand).epsilon(1e-13));
    CHECK(cf == doctest::Approx(oracle::kEq15Table1).epsilon(1e-13));

    auto p0 = p;
    p0.lambda_p = 1e-30;
    CHECK(closed_form_single_link_coverage(p0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("closed-form coverage decreases in sigma, lambda_p and theta") {
    auto p = table1(0.5);
    double prev = 1.0;
    for (double sigma : {5.0, 10.0, 20.0, 30.0}) {
        p.sigma = sigma;
        const double v = closed_form_single_link_coverage(p);
        CHECK(v < prev);
        prev = v;
    }
    p = table1(0.5);
    prev = 1.0;
    for (double lam : {1e-5, 2e-5, 3e-5}) {
        p.lambda_p = lam;
        const double v = closed_form_single_link_coverage(p);
        CHECK(v < prev);
        prev = v;
    }
    p = table1(0.5);
    prev = 1.0;
    for (double theta : {0.5, 1.0, 2.0, 4.0}) {
        p.theta = theta;
        const double v = closed_form_single_link_coverage(p);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("closed-form offloading gain equals the general form with substituted coverage") {
    const auto p = table1(0.5);
    const auto lib = ContentLibrary::make(100, 8, 0.5);
    for (const auto& policy : {uniform_policy(lib), zipf_policy(lib)}) {
        const double direct = closed_form_offloading_gain(p, lib, policy);
        const double substituted = offloading_gain_given(
            lib, policy, p.n_bar, closed_form_single_link_coverage(p));
        CHECK(direct == doctest::Approx(substituted).epsilon(1e-12));
    }
}

TEST_CASE("closed-form offloading gain decreases in sigma and lambda_p at fixed policy") {
    const auto lib = ContentLibrary::make(100, 8, 0.5);
    const auto policy = uniform_policy(lib);
    auto p = table1(0.5);
    double prev = 1.0;
    for (double sigma : {5.0, 10.0, 15.0, 20.0, 25.0, 30.0}) {
        p.sigma = sigma;
        const double v = closed_form_offloading_gain(p, lib, policy);
        CHECK(v < prev);
        prev = v;
    }
    p = table1(0.5);
    prev = 1.0;
    for (double lam : {1e-5, 2e-5, 3e-5}) {
        p.lambda_p = lam;
        const double v = closed_form_offloading_gain(p, lib, policy);
        CHECK(v < prev);
        prev = v;
    }
}
