#pragma once

#include <cstddef>
#include <vector>

namespace ks2 {

struct StepAtom {
    double value;  // p-value where the CDF jumps
    double mass;   // jump height, > 0
};

// Discrete distribution with a piecewise-constant, right-continuous CDF.
class StepDistribution {
public:
    StepDistribution() = default;

    // Sorts, merges equal values, folds masses below fold_threshold into the
    // nearest retained atom, normalizes by the compensated total, and
    // precomputes the cumulative CDF.
    static StepDistribution from_atoms(std::vector<StepAtom> raw,
                                       double fold_threshold = 1e-18);

    const std::vector<StepAtom>& atoms() const { return atoms_; }
    const std::vector<double>& cumulative() const { return cum_; }
    size_t size() const { return atoms_.size(); }

    double cdf(double x) const;       // P(X <= x)
    double cdf_left(double x) const;  // P(X < x)
    double sample(double u) const;    // inverse CDF, u in [0,1)

private:
    std::vector<StepAtom> atoms_;  // strictly increasing values
    std::vector<double> cum_;      // cum_[i] = cdf(atoms_[i].value)
};

}
