#include "ks2/level1.hpp"
#include "ks2/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ks2 {

namespace level1_detail {

std::vector<uint32_t> nonoverlap_templates(int m) {
    if (m < 2 || m > 21) throw std::invalid_argument("nonoverlap: template length out of range");
    std::vector<uint32_t> out;
    for (uint32_t w = 0; w < (uint32_t(1) << m); w++) {
        bool bordered = false;
        for (int k = 1; k < m && !bordered; k++)
            if ((w >> k) == (w & ((uint32_t(1) << (m - k)) - 1))) bordered = true;
        if (!bordered) out.push_back(w);
    }
    return out;
}

}

Level1Result nonoverlap_test_impl(const BitSequence& seq, int variant, const Level1Params& params) {
    uint64_t n = seq.size();
    int m = params.nonoverlap_m;
    uint64_t N = uint64_t(params.nonoverlap_N);
    if (m < 2) throw std::invalid_argument("nonoverlap: m must be >= 2");
    if (N < 1) throw std::invalid_argument("nonoverlap: N must be >= 1");
    uint64_t M = n / N;
    if (M < uint64_t(m) + 2) throw std::invalid_argument("nonoverlap: blocks too short");
    if (params.enforce_min_n && n < 100)
        throw std::invalid_argument("nonoverlap: n must be >= 100");

    auto templates = level1_detail::nonoverlap_templates(m);
    if (variant < 1 || uint64_t(variant) > templates.size())
        throw std::invalid_argument("nonoverlap: template variant out of range");
    uint32_t tpl = templates[variant - 1];
    uint32_t mask = (uint32_t(1) << m) - 1;

    double mu = double(M - m + 1) / std::pow(2.0, m);
    double var = double(M) * (1.0 / std::pow(2.0, m) - double(2 * m - 1) / std::pow(2.0, 2 * m));

    double chi2 = 0.0;
    for (uint64_t b = 0; b < N; b++) {
        uint64_t w = 0;
        uint32_t window = 0;
        int filled = 0;
        for (uint64_t i = b * M; i < (b + 1) * M; i++) {
            window = ((window << 1) | uint32_t(seq.bit(i))) & mask;
            if (++filled >= m && window == tpl) {
                w++;
                filled = 0;  // non-overlapping: resume m bits later
            }
        }
        chi2 += (double(w) - mu) * (double(w) - mu) / var;
    }
    return {TestId::non_overlapping_template, variant, chi2,
            igamc(double(N) / 2.0, chi2 / 2.0), n};
}

Level1Result overlap_test_impl(const BitSequence& seq, const Level1Params& params) {
    uint64_t n = seq.size();
    int m = params.overlap_m;
    uint64_t M = uint64_t(params.overlap_M);
    if (m < 2) throw std::invalid_argument("overlapping: m must be >= 2");
    if (M < uint64_t(m)) throw std::invalid_argument("overlapping: M must be >= m");
    uint64_t N = n / M;
    if (N < 1) throw std::invalid_argument("overlapping: need at least one block");
    if (params.enforce_min_n && n < 1000000)
        throw std::invalid_argument("overlapping: n must be >= 10^6");

    constexpr int K = 5;
    double lambda = double(M - m + 1) / std::pow(2.0, m);
    double eta = lambda / 2.0;

    double pi[K + 1];
    pi[0] = std::exp(-eta);
    for (int u = 1; u < K; u++) {
        double sum = 0.0;
        for (int l = 1; l <= u; l++)
            sum += std::exp(-eta - u * std::log(2.0) + l * std::log(eta) - std::lgamma(l + 1) +
                            std::lgamma(u) - std::lgamma(l) - std::lgamma(u - l + 1));
        pi[u] = sum;
    }
    double tail = 1.0;
    for (int u = 0; u < K; u++) tail -= pi[u];
    pi[K] = tail;

    uint64_t nu[K + 1] = {};
    for (uint64_t b = 0; b < N; b++) {
        uint64_t count = 0;
        int run = 0;
        for (uint64_t i = b * M; i < (b + 1) * M; i++) {
            run = seq.bit(i) ? run + 1 : 0;
            if (run >= m) count++;
        }
        nu[count > K ? K : count]++;
    }
    double chi2 = 0.0;
    for (int u = 0; u <= K; u++) {
        double expect = double(N) * pi[u];
        chi2 += (double(nu[u]) - expect) * (double(nu[u]) - expect) / expect;
    }
    return {TestId::overlapping_template, 1, chi2, igamc(double(K) / 2.0, chi2 / 2.0), n};
}

}
