#include "ks2/level1.hpp"

#include "ks2/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace ks2 {

namespace {

const char* names[] = {
    "frequency", "block-frequency", "runs", "longest-run", "rank", "dft",
    "non-overlapping-template", "overlapping-template", "universal",
    "linear-complexity", "serial", "approximate-entropy", "cumulative-sums",
};

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}

const char* test_name(TestId id) { return names[int(id)]; }

std::optional<TestId> test_from_name(std::string_view name) {
    for (int i = 0; i < int(std::size(names)); i++)
        if (name == names[i]) return TestId(i);
    return std::nullopt;
}

const std::vector<TestId>& all_tests() {
    static const std::vector<TestId> ids = [] {
        std::vector<TestId> v;
        for (int i = 0; i < int(std::size(names)); i++) v.push_back(TestId(i));
        return v;
    }();
    return ids;
}

bool test_has_variants(TestId id) {
    return id == TestId::non_overlapping_template || id == TestId::serial ||
           id == TestId::cumulative_sums;
}

Level1Result frequency_test(const BitSequence& seq, const Level1Params& params) {
    uint64_t n = seq.size();
    if (params.enforce_min_n) require(n >= 100, "frequency: n must be >= 100");
    double s = 2.0 * double(seq.ones()) - double(n);
    double s_obs = std::fabs(s) / std::sqrt(double(n));
    return {TestId::frequency, 1, s_obs, erfc(s_obs / std::sqrt(2.0)), n};
}

namespace {

Level1Result block_frequency_test(const BitSequence& seq, const Level1Params& params) {
    uint64_t n = seq.size();
    uint64_t M = uint64_t(params.block_frequency_M);
    require(params.block_frequency_M > 0, "block-frequency: M must be > 0");
    if (params.enforce_min_n) require(n >= 100, "block-frequency: n must be >= 100");
    uint64_t N = n / M;
    require(N >= 1, "block-frequency: need at least one block");
    double chi2 = 0.0;
    for (uint64_t b = 0; b < N; b++) {
        uint64_t ones = 0;
        for (uint64_t i = b * M; i < (b + 1) * M; i++) ones += seq.bit(i);
        double pi = double(ones) / double(M);
        chi2 += (pi - 0.5) * (pi - 0.5);
    }
    chi2 *= 4.0 * double(M);
    return {TestId::block_frequency, 1, chi2, igamc(double(N) / 2.0, chi2 / 2.0), n};
}

uint64_t transitions(const BitSequence& seq) {
    uint64_t n = seq.size();
    const auto& w = seq.words();
    uint64_t t = 0;
    for (size_t k = 0; k < w.size(); k++) {
        uint64_t x = w[k] ^ (w[k] >> 1);  // bit i marks seq[64k+i] != seq[64k+i+1], i <= 62
        uint64_t hi = 64 * k + 62;        // highest in-word pair start
        uint64_t valid = (n >= 2 && hi <= n - 2) ? 63 : (n >= 64 * k + 2 ? n - 1 - 64 * k : 0);
        if (valid < 63) x &= (uint64_t(1) << valid) - 1;
        else x &= 0x7FFFFFFFFFFFFFFFULL;
        t += std::popcount(x);
        if (k + 1 < w.size() && 64 * k + 63 <= n - 2)
            t += ((w[k] >> 63) & 1) ^ (w[k + 1] & 1);
    }
    return t;
}

Level1Result runs_test(const BitSequence& seq, const Level1Params& params) {
    uint64_t n = seq.size();
    if (params.enforce_min_n) require(n >= 100, "runs: n must be >= 100");
    require(n >= 2, "runs: n must be >= 2");
    double pi = double(seq.ones()) / double(n);
    double tau = 2.0 / std::sqrt(double(n));
    if (std::fabs(pi - 0.5) >= tau)
        return {TestId::runs, 1, std::fabs(pi - 0.5), 0.0, n};  // frequency pre-test failed
    double v = 1.0 + double(transitions(seq));
    double num = std::fabs(v - 2.0 * double(n) * pi * (1.0 - pi));
    double den = 2.0 * std::sqrt(2.0 * double(n)) * pi * (1.0 - pi);
    return {TestId::runs, 1, v, erfc(num / den), n};
}

Level1Result longest_run_test(const BitSequence& seq, const Level1Params&) {
    uint64_t n = seq.size();
    require(n >= 128, "longest-run: n must be >= 128");
    uint64_t M;
    int K;
    std::vector<int> edges;
    std::vector<double> pi;
    if (n < 6272) {
        M = 8; K = 3; edges = {1, 2, 3, 4};
        pi = {0.21484375, 0.3671875, 0.23046875, 0.1875};
    } else if (n < 750000) {
        M = 128; K = 5; edges = {4, 5, 6, 7, 8, 9};
        pi = {0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071, 0.112398847};
    } else {
        M = 10000; K = 6; edges = {10, 11, 12, 13, 14, 15, 16};
        pi = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
    }
    uint64_t N = n / M;
    std::vector<uint64_t> nu(K + 1, 0);
    for (uint64_t b = 0; b < N; b++) {
        int run = 0, longest = 0;
        for (uint64_t i = b * M; i < (b + 1) * M; i++) {
            run = seq.bit(i) ? run + 1 : 0;
            if (run > longest) longest = run;
        }
        int cls;
        if (longest <= edges.front()) cls = 0;
        else if (longest >= edges.back()) cls = K;
        else cls = longest - edges.front();
        nu[cls]++;
    }
    double chi2 = 0.0;
    for (int i = 0; i <= K; i++) {
        double expect = double(N) * pi[i];
        chi2 += (double(nu[i]) - expect) * (double(nu[i]) - expect) / expect;
    }
    return {TestId::longest_run, 1, chi2, igamc(double(K) / 2.0, chi2 / 2.0), n};
}

Level1Result cumulative_sums_test(const BitSequence& seq, int variant,
                                  const Level1Params& params) {
    uint64_t n = seq.size();
    if (params.enforce_min_n) require(n >= 100, "cumulative-sums: n must be >= 100");
    require(variant == 1 || variant == 2, "cumulative-sums: variant must be 1 or 2");
    int64_t s = 0;
    uint64_t z = 0;
    bool forward = variant == 1;
    for (uint64_t i = 0; i < n; i++) {
        s += seq.bit(forward ? i : n - 1 - i) ? 1 : -1;
        uint64_t a = uint64_t(s < 0 ? -s : s);
        if (a > z) z = a;
    }
    double p = level1_detail::cusum_pvalue(n, z);
    return {TestId::cumulative_sums, variant, double(z), p, n};
}

}

namespace level1_detail {

double cusum_pvalue(uint64_t n, uint64_t z) {
    if (z == 0) return 1.0;  // only possible for n = 0 inputs upstream
    double zn = double(z), nd = double(n);
    double sn = std::sqrt(nd);
    auto Phi = [](double x) { return 0.5 * erfc(-x / std::sqrt(2.0)); };
    double p = 1.0;
    int64_t lo = int64_t(std::floor((-nd / zn + 1.0) / 4.0));
    int64_t hi = int64_t(std::floor((nd / zn - 1.0) / 4.0));
    for (int64_t k = lo; k <= hi; k++)
        p -= Phi((4.0 * k + 1.0) * zn / sn) - Phi((4.0 * k - 1.0) * zn / sn);
    lo = int64_t(std::floor((-nd / zn - 3.0) / 4.0));
    for (int64_t k = lo; k <= hi; k++)
        p += Phi((4.0 * k + 3.0) * zn / sn) - Phi((4.0 * k + 1.0) * zn / sn);
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    return p;
}

int serial_default_m(uint64_t n) {
    int lg = int(std::floor(std::log2(double(n))));
    return std::min(16, lg - 3);
}

int apen_default_m(uint64_t n) {
    int lg = int(std::floor(std::log2(double(n))));
    return std::min(10, lg - 6);
}

}

// in rank.cpp, dft.cpp, templates.cpp, universal.cpp, complexity.cpp, serial_apen.cpp
Level1Result rank_test_impl(const BitSequence&, const Level1Params&);
Level1Result dft_test_impl(const BitSequence&, const Level1Params&);
Level1Result nonoverlap_test_impl(const BitSequence&, int variant, const Level1Params&);
Level1Result overlap_test_impl(const BitSequence&, const Level1Params&);
Level1Result universal_test_impl(const BitSequence&, const Level1Params&);
Level1Result complexity_test_impl(const BitSequence&, const Level1Params&);
Level1Result serial_test_impl(const BitSequence&, int variant, const Level1Params&);
Level1Result apen_test_impl(const BitSequence&, const Level1Params&);

Level1Result binary_matrix_rank_test(const BitSequence& seq, const Level1Params& params) {
    return rank_test_impl(seq, params);
}

Level1Result run_level1(TestId id, const BitSequence& seq, int variant,
                        const Level1Params& params) {
    require(variant >= 1, "run_level1: variant must be >= 1");
    if (!test_has_variants(id)) require(variant == 1, "run_level1: test has a single output");
    switch (id) {
        case TestId::frequency: return frequency_test(seq, params);
        case TestId::block_frequency: return block_frequency_test(seq, params);
        case TestId::runs: return runs_test(seq, params);
        case TestId::longest_run: return longest_run_test(seq, params);
        case TestId::rank: return rank_test_impl(seq, params);
        case TestId::dft: return dft_test_impl(seq, params);
        case TestId::non_overlapping_template: return nonoverlap_test_impl(seq, variant, params);
        case TestId::overlapping_template: return overlap_test_impl(seq, params);
        case TestId::universal: return universal_test_impl(seq, params);
        case TestId::linear_complexity: return complexity_test_impl(seq, params);
        case TestId::serial: return serial_test_impl(seq, variant, params);
        case TestId::approximate_entropy: return apen_test_impl(seq, params);
        case TestId::cumulative_sums: return cumulative_sums_test(seq, variant, params);
    }
    throw std::invalid_argument("run_level1: unknown test id");
}

}
