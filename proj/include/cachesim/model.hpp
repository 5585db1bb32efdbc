#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cachesim {

namespace units {

double db_to_linear(double db);
double linear_to_db(double lin);
double per_km2_to_per_m2(double per_km2);
double per_m2_to_per_km2(double per_m2);

} // namespace units

// Physical, geometry and channel-access parameters. All fields are SI linear:
// lambda_p in clusters/m^2, sigma in m, theta as a linear SIR ratio.
struct NetworkParams {
    double lambda_p; // cluster density, 1/m^2
    double n_bar;    // mean devices per cluster
    double sigma;    // daughter displacement std dev, m
    double alpha;    // path loss exponent, > 2
    double theta;    // SIR threshold, linear
    double p_d;      // D2D transmit power, W (cancels out of every SIR ratio)
    double q;        // channel access probability

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// File catalog with Zipf popularity. popularity[i] is the request probability
// of file i+1 (files are 1-indexed in formulas, 0-indexed in storage).
struct ContentLibrary {
    int n_f = 0;
    int m = 0;
    double beta = 0.0;
    std::vector<double> popularity;

    static ContentLibrary make(int n_f, int m, double beta);
    // m == n_f fills every cache completely; allowed but flagged.
    bool degenerate_full_cache() const { return m == n_f; }
    void validate() const;
};

// Marginal caching probabilities b_i, sum b_i = m within 1e-9, each in [0,1].
struct CachingPolicy {
    std::vector<double> b;
};

struct PolicyViolation {
    enum class Kind { length_mismatch, range, budget };
    Kind kind;
    int index;    // offending file index (0-based), -1 for aggregate violations
    double value; // offending b_i or the budget sum
    std::string message;
};

std::vector<double> zipf_popularity(int n_f, double beta);

CachingPolicy uniform_policy(const ContentLibrary& lib);

// Popularity-proportional placement with cap-and-redistribute: b_i = min(1, t p_i)
// where t is raised until the budget m is exhausted.
CachingPolicy zipf_policy(const ContentLibrary& lib);

// nullopt means the policy satisfies both constraints.
std::optional<PolicyViolation> validate_policy(const CachingPolicy& policy,
                                               const ContentLibrary& lib);

} // namespace cachesim
