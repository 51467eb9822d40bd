#include "ks2/level1.hpp"
#include "ks2/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ks2 {

namespace {

// Expected value and variance of the per-block statistic, indexed by L.
const double expected_value[17] = {0, 0.73264948, 1.5374383, 2.40160681, 3.31122472,
                                   4.25342659, 5.2177052,  6.1962507, 7.1836656,
                                   8.1764248,  9.1723243,  10.170032, 11.168765,
                                   12.168070,  13.167693,  14.167488, 15.167379};
const double variance[17] = {0, 0.690, 1.338, 1.901, 2.358, 2.705, 2.954, 3.125, 3.238,
                             3.311, 3.356, 3.384, 3.401, 3.410, 3.416, 3.419, 3.421};

}

namespace level1_detail {

UniversalPlan universal_plan(uint64_t n, const Level1Params& params) {
    int L = params.universal_L;
    if (L == 0) {
        L = 5;
        const uint64_t thresholds[] = {387840,    904960,    2068480,   4654080,
                                       10342400,  22753280,  49643520,  107560960,
                                       231669760, 496435200, 1059061760};
        for (int i = 0; i < 11; i++)
            if (n >= thresholds[i]) L = 6 + i;
    }
    if (L < 1 || L > 16) throw std::invalid_argument("universal: L out of range");
    int Q = params.universal_Q ? params.universal_Q : 10 * (1 << L);
    uint64_t blocks = n / uint64_t(L);
    if (blocks <= uint64_t(Q)) throw std::invalid_argument("universal: sequence too short");
    return {L, Q, blocks - uint64_t(Q)};
}

}

Level1Result universal_test_impl(const BitSequence& seq, const Level1Params& params) {
    uint64_t n = seq.size();
    if (params.enforce_min_n && n < 387840)
        throw std::invalid_argument("universal: n must be >= 387840");
    auto plan = level1_detail::universal_plan(n, params);
    const int L = plan.L;
    const uint64_t Q = uint64_t(plan.Q), K = plan.K;

    std::vector<uint64_t> table(uint64_t(1) << L, 0);
    auto block = [&](uint64_t i) {  // 1-based block number
        uint64_t pat = 0;
        uint64_t base = (i - 1) * uint64_t(L);
        for (int j = 0; j < L; j++) pat = (pat << 1) | uint64_t(seq.bit(base + j));
        return pat;
    };
    for (uint64_t i = 1; i <= Q; i++) table[block(i)] = i;
    double sum = 0.0;
    for (uint64_t i = Q + 1; i <= Q + K; i++) {
        uint64_t pat = block(i);
        sum += std::log2(double(i - table[pat]));
        table[pat] = i;
    }
    double fn = sum / double(K);
    double c = 0.7 - 0.8 / L + (4.0 + 32.0 / L) * std::pow(double(K), -3.0 / L) / 15.0;
    double sigma = c * std::sqrt(variance[L] / double(K));
    double p = erfc(std::fabs(fn - expected_value[L]) / (std::sqrt(2.0) * sigma));
    return {TestId::universal, 1, fn, p, n};
}

}
