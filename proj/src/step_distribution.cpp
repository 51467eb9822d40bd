#include "ks2/step_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ks2 {

namespace {

double kahan_total(const std::vector<StepAtom>& atoms) {
    double sum = 0.0, comp = 0.0;
    for (const auto& a : atoms) {
        double y = a.mass - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

}

StepDistribution StepDistribution::from_atoms(std::vector<StepAtom> raw, double fold_threshold) {
    if (raw.empty()) throw std::invalid_argument("StepDistribution: no atoms");
    for (const auto& a : raw)
        if (!(a.mass >= 0.0) || !(a.value >= 0.0 && a.value <= 1.0))
            throw std::invalid_argument("StepDistribution: bad atom");

    std::sort(raw.begin(), raw.end(),
              [](const StepAtom& x, const StepAtom& y) { return x.value < y.value; });

    // merge exact-equal values
    std::vector<StepAtom> merged;
    merged.reserve(raw.size());
    for (const auto& a : raw) {
        if (!merged.empty() && merged.back().value == a.value) merged.back().mass += a.mass;
        else merged.push_back(a);
    }

    std::vector<StepAtom> kept;
    kept.reserve(merged.size());
    for (const auto& a : merged)
        if (a.mass >= fold_threshold) kept.push_back(a);

    if (kept.empty()) {
        kept = merged;
    } else if (kept.size() != merged.size()) {
        // fold dropped mass into the nearest retained atom by value
        for (const auto& a : merged) {
            if (a.mass >= fold_threshold) continue;
            auto it = std::lower_bound(kept.begin(), kept.end(), a.value,
                                       [](const StepAtom& k, double v) { return k.value < v; });
            if (it == kept.end()) --it;
            else if (it != kept.begin()) {
                auto prev = std::prev(it);
                if (a.value - prev->value < it->value - a.value) it = prev;
            }
            it->mass += a.mass;
        }
    }

    StepDistribution d;
    d.atoms_ = std::move(kept);
    double total = kahan_total(d.atoms_);
    if (!(total > 0.0)) throw std::invalid_argument("StepDistribution: zero total mass");
    for (auto& a : d.atoms_) a.mass /= total;

    d.cum_.resize(d.atoms_.size());
    double sum = 0.0, comp = 0.0;
    for (size_t i = 0; i < d.atoms_.size(); i++) {
        double y = d.atoms_[i].mass - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        d.cum_[i] = sum;
    }
    d.cum_.back() = 1.0;
    return d;
}

double StepDistribution::cdf(double x) const {
    auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                               [](double v, const StepAtom& a) { return v < a.value; });
    if (it == atoms_.begin()) return 0.0;
    return cum_[size_t(it - atoms_.begin()) - 1];
}

double StepDistribution::cdf_left(double x) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                               [](const StepAtom& a, double v) { return a.value < v; });
    if (it == atoms_.begin()) return 0.0;
    return cum_[size_t(it - atoms_.begin()) - 1];
}

double StepDistribution::sample(double u) const {
    auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    if (it == cum_.end()) --it;
    return atoms_[size_t(it - cum_.begin())].value;
}

}
