#include "ks2/level1.hpp"
#include "ks2/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ks2 {

namespace {

// Overlapping m-pattern counts with wraparound; n counts total.
std::vector<uint32_t> pattern_counts(const BitSequence& seq, int m) {
    uint64_t n = seq.size();
    std::vector<uint32_t> counts(size_t(1) << m, 0);
    uint64_t window = 0, mask = (uint64_t(1) << m) - 1;
    for (int j = 0; j < m - 1; j++) window = (window << 1) | uint64_t(seq.bit(j));
    for (uint64_t i = 0; i < n; i++) {
        uint64_t next = (i + uint64_t(m) - 1) % n;
        window = ((window << 1) | uint64_t(seq.bit(next))) & mask;
        counts[window]++;
    }
    return counts;
}

double psi_sq(const BitSequence& seq, int m) {
    if (m <= 0) return 0.0;
    uint64_t n = seq.size();
    auto counts = pattern_counts(seq, m);
    double s = 0.0;
    for (uint32_t c : counts) s += double(c) * double(c);
    return s * std::pow(2.0, m) / double(n) - double(n);
}

}

Level1Result serial_test_impl(const BitSequence& seq, int variant, const Level1Params& params) {
    uint64_t n = seq.size();
    if (variant != 1 && variant != 2)
        throw std::invalid_argument("serial: variant must be 1 or 2");
    int m = params.serial_m ? params.serial_m : level1_detail::serial_default_m(n);
    if (m < 2) throw std::invalid_argument("serial: m must be >= 2");
    if (params.enforce_min_n && m >= int(std::floor(std::log2(double(n)))) - 2)
        throw std::invalid_argument("serial: m too large for n");

    double p0 = psi_sq(seq, m);
    double p1 = psi_sq(seq, m - 1);
    double p2 = psi_sq(seq, m - 2);
    double d1 = p0 - p1;
    double d2 = p0 - 2.0 * p1 + p2;
    if (variant == 1)
        return {TestId::serial, 1, d1, igamc(std::pow(2.0, m - 2), d1 / 2.0), n};
    return {TestId::serial, 2, d2, igamc(std::pow(2.0, m - 3), d2 / 2.0), n};
}

Level1Result apen_test_impl(const BitSequence& seq, const Level1Params& params) {
    uint64_t n = seq.size();
    int m = params.apen_m ? params.apen_m : level1_detail::apen_default_m(n);
    if (m < 1) throw std::invalid_argument("approximate-entropy: m must be >= 1");
    if (params.enforce_min_n && m >= int(std::floor(std::log2(double(n)))) - 5)
        throw std::invalid_argument("approximate-entropy: m too large for n");

    auto phi = [&](int mm) {
        auto counts = pattern_counts(seq, mm);
        double s = 0.0;
        for (uint32_t c : counts)
            if (c) {
                double f = double(c) / double(n);
                s += f * std::log(f);
            }
        return s;
    };
    double apen = phi(m) - phi(m + 1);
    double chi2 = 2.0 * double(n) * (std::log(2.0) - apen);
    return {TestId::approximate_entropy, 1, chi2,
            igamc(std::pow(2.0, m - 1), chi2 / 2.0), n};
}

}
