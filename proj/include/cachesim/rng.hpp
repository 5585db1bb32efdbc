#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace cachesim::sim {

// splitmix64 finalizer; stateless mixing step used for stream derivation.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// xoshiro256++ with the state derived by hashing (seed, trial, stream).
// Every trial draws from its own counter-derived stream, so results are
// independent of execution order and worker count.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
        std::uint64_t h = mix64(seed);
        h = mix64(h ^ (0x9E3779B97F4A7C15ull * (trial + 1)));
        h = mix64(h ^ (0xD1B54A32D192ED03ull * (stream + 1)));
        for (auto& word : s_) {
            h = mix64(h);
            word = h;
        }
        s_[0] |= 1; // never all-zero
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on (0, 1): strictly positive so logs and systematic-sampling
    // offsets are always safe
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    double exponential() { return -std::log(uniform()); } // mean 1

    // Box-Muller pair; natural fit for 2-D Gaussian displacements.
    std::pair<double, double> gaussian_pair(double stddev) {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double t = 2.0 * M_PI * uniform();
        return {stddev * r * std::cos(t), stddev * r * std::sin(t)};
    }

    // Chunked Knuth sampler: exact for any mean since
    // Poisson(a + b) = Poisson(a) + Poisson(b).
    long poisson(double mean) {
        long total = 0;
        while (mean > 30.0) {
            total += poisson_knuth(30.0);
            mean -= 30.0;
        }
        return total + poisson_knuth(mean);
    }

    std::uint64_t uniform_int(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    long poisson_knuth(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        long k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }

    std::uint64_t s_[4];
};

} // namespace cachesim::sim
