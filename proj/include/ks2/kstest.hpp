#pragma once

#include "ks2/step_distribution.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ks2 {

struct Provenance {
    std::string test;
    int variant = 1;
    uint64_t n = 0;
    std::string generator;
};

// Sample of first-level p-values, sorted at ingest.
class PValueSample {
public:
    PValueSample() = default;
    explicit PValueSample(std::vector<double> values, Provenance prov = {});

    const std::vector<double>& values() const { return values_; }
    size_t size() const { return values_.size(); }
    const Provenance& provenance() const { return prov_; }

private:
    std::vector<double> values_;
    Provenance prov_;
};

class Ecdf {
public:
    explicit Ecdf(const PValueSample& s) : s_(&s) {}
    // (1/m) #{ p_i <= x }
    double operator()(double x) const;

private:
    const PValueSample* s_;
};

struct ReferenceDistribution {
    enum class Kind { uniform, step, empirical };

    Kind kind = Kind::uniform;
    const StepDistribution* step = nullptr;
    const PValueSample* empirical = nullptr;

    static ReferenceDistribution make_uniform() { return {}; }
    static ReferenceDistribution make_step(const StepDistribution& s) {
        return {Kind::step, &s, nullptr};
    }
    static ReferenceDistribution make_empirical(const PValueSample& q) {
        return {Kind::empirical, nullptr, &q};
    }
};

struct KsResult {
    double statistic = 0.0;    // sup already scaled by sqrt(effective_m)
    double effective_m = 0.0;  // m, or m m'/(m+m') for two samples
    double p_value = 1.0;
    bool accepted = true;
    double alpha = 0.01;
};

// Unscaled sup distances; samples must be sorted ascending.
double ks_sup_uniform(const std::vector<double>& sorted);
double ks_sup_continuous(const std::vector<double>& sorted,
                         const std::function<double(double)>& cdf);
double ks_sup_step(const std::vector<double>& sorted, const StepDistribution& ref);
double ks_sup_two(const std::vector<double>& a, const std::vector<double>& b);

KsResult ks_one_sample(const PValueSample& p, const ReferenceDistribution& ref,
                       double alpha = 0.01);
KsResult ks_two_sample(const PValueSample& p, const PValueSample& q,
                       double alpha = 0.01);

}
