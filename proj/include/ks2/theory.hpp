#pragma once

#include "ks2/step_distribution.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace ks2 {

struct DeviationBound {
    double d = 0.0;           // sup_x |G(x) - F(x)|
    double attained_at = 0.0; // x realizing the sup
    std::string reference;    // description of F
};

// Piecewise-linear toy CDF: (1+2e)x on [0,1/2], (1-2e)x + 2e on (1/2,1].
struct GeParams {
    double e = 0.0;  // |e| < 1
};

// Exact p-value distribution of the ones-count test at length n: p = erfc(|S|/sqrt(2n))
// over binomial outcomes S = 2k - n, +/-S merged, log-space masses.
StepDistribution exact_distribution_frequency(uint64_t n);

// Exact p-value distribution of the 32x32 matrix-rank test at length n:
// trinomial counts over N = floor(n/1024) matrices, p = exp(-chi2/2).
StepDistribution exact_distribution_rank(uint64_t n);

// Class probabilities (full rank, full-1, rest) of a random m x m GF(2)
// matrix, from the exact product formula.
std::array<double, 3> gf2_rank_class_probs(int m);

DeviationBound compute_d(const StepDistribution& G);  // vs uniform
DeviationBound compute_d(const GeParams& G);          // vs uniform: |e| exactly

// sqrt(m) * d, the bias bound on the one-sample statistic.
double delta_bound(uint64_t m, double d);

// floor((delta/d)^2); nullopt when d == 0 (no finite bound).
std::optional<uint64_t> safe_sample_size(double delta, double d);

// sqrt(pi/2) * ln 2, the large-m mean of the K-S statistic under H0.
double mu_constant();

double ge_cdf(const GeParams& g, double x);
double ge_sample(const GeParams& g, double u);

}
