#include "ks2/kstest.hpp"

#include "ks2/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ks2 {

PValueSample::PValueSample(std::vector<double> values, Provenance prov)
    : values_(std::move(values)), prov_(std::move(prov)) {
    if (values_.empty()) throw std::invalid_argument("PValueSample: empty sample");
    for (double v : values_)
        if (!(v >= 0.0) || !(v <= 1.0))
            throw std::invalid_argument("PValueSample: value outside [0,1]");
    std::sort(values_.begin(), values_.end());
}

double Ecdf::operator()(double x) const {
    const auto& v = s_->values();
    return double(std::upper_bound(v.begin(), v.end(), x) - v.begin()) / double(v.size());
}

double ks_sup_uniform(const std::vector<double>& sorted) {
    return ks_sup_continuous(sorted, [](double x) { return x; });
}

double ks_sup_continuous(const std::vector<double>& sorted,
                         const std::function<double(double)>& cdf) {
    const double m = double(sorted.size());
    double sup = 0.0;
    for (size_t i = 0; i < sorted.size(); i++) {
        double f = cdf(sorted[i]);
        sup = std::max(sup, double(i + 1) / m - f);
        sup = std::max(sup, f - double(i) / m);
    }
    return sup;
}

double ks_sup_step(const std::vector<double>& sorted, const StepDistribution& ref) {
    // Both CDFs are right-continuous steps; the sup of |E - F| is attained at
    // a jump of either, approached from the left or hit on the right. Walk
    // the merged jump locations tracking both one-sided values.
    const auto& atoms = ref.atoms();
    const auto& cum = ref.cumulative();
    const double m = double(sorted.size());
    size_t si = 0, ai = 0;
    double sup = 0.0;
    while (si < sorted.size() || ai < atoms.size()) {
        double x = (si < sorted.size() && (ai == atoms.size() || sorted[si] <= atoms[ai].value))
                       ? sorted[si]
                       : atoms[ai].value;
        double e_left = double(si) / m;
        double f_left = (ai == 0) ? 0.0 : cum[ai - 1];
        while (si < sorted.size() && sorted[si] == x) si++;
        if (ai < atoms.size() && atoms[ai].value == x) ai++;
        double e_right = double(si) / m;
        double f_right = (ai == 0) ? 0.0 : cum[ai - 1];
        sup = std::max(sup, std::fabs(e_left - f_left));
        sup = std::max(sup, std::fabs(e_right - f_right));
    }
    return sup;
}

double ks_sup_two(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = double(a.size()), mb = double(b.size());
    size_t i = 0, j = 0;
    double sup = 0.0;
    while (i < a.size() || j < b.size()) {
        double x = (i < a.size() && (j == b.size() || a[i] <= b[j])) ? a[i] : b[j];
        while (i < a.size() && a[i] == x) i++;
        while (j < b.size() && b[j] == x) j++;
        sup = std::max(sup, std::fabs(double(i) / ma - double(j) / mb));
    }
    return sup;
}

namespace {

KsResult finish(double sup, double effective_m, double alpha) {
    KsResult r;
    r.effective_m = effective_m;
    r.statistic = std::sqrt(effective_m) * sup;
    r.p_value = kolmogorov_sf(r.statistic);
    r.alpha = alpha;
    r.accepted = r.statistic <= ks_boundary(alpha);
    return r;
}

}

KsResult ks_one_sample(const PValueSample& p, const ReferenceDistribution& ref, double alpha) {
    if (p.size() == 0) throw std::invalid_argument("ks_one_sample: empty sample");
    double sup = 0.0;
    switch (ref.kind) {
        case ReferenceDistribution::Kind::uniform:
            sup = ks_sup_uniform(p.values());
            break;
        case ReferenceDistribution::Kind::step:
            if (!ref.step) throw std::invalid_argument("ks_one_sample: missing step payload");
            sup = ks_sup_step(p.values(), *ref.step);
            break;
        case ReferenceDistribution::Kind::empirical:
            if (!ref.empirical) throw std::invalid_argument("ks_one_sample: missing empirical payload");
            sup = ks_sup_two(p.values(), ref.empirical->values());
            break;
    }
    return finish(sup, double(p.size()), alpha);
}

KsResult ks_two_sample(const PValueSample& p, const PValueSample& q, double alpha) {
    if (p.size() == 0 || q.size() == 0)
        throw std::invalid_argument("ks_two_sample: empty sample");
    double sup = ks_sup_two(p.values(), q.values());
    double m = double(p.size()), mp = double(q.size());
    return finish(sup, m * mp / (m + mp), alpha);
}

}
