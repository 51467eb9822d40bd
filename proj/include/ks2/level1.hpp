#pragma once

#include "ks2/bitseq.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ks2 {

enum class TestId {
    frequency,
    block_frequency,
    runs,
    longest_run,
    rank,
    dft,
    non_overlapping_template,
    overlapping_template,
    universal,
    linear_complexity,
    serial,
    approximate_entropy,
    cumulative_sums,
};

const char* test_name(TestId id);
std::optional<TestId> test_from_name(std::string_view name);
const std::vector<TestId>& all_tests();

// true for tests with more than one output (template index / forward-backward
// / first-second statistic); variant is 1-based, default 1.
bool test_has_variants(TestId id);

struct Level1Params {
    // When set, reject sequences below each test's standard recommended
    // length instead of running on them.
    bool enforce_min_n = true;

    int block_frequency_M = 128;
    int nonoverlap_m = 9;  // template length
    int nonoverlap_N = 8;  // number of blocks
    int overlap_m = 9;     // all-ones template length
    int overlap_M = 1032;  // block length
    int universal_L = 0;   // 0 = auto from n
    int universal_Q = 0;   // 0 = 10 * 2^L
    int serial_m = 0;      // 0 = min(16, floor(log2 n) - 3)
    int apen_m = 0;        // 0 = min(10, floor(log2 n) - 6)
    int lc_M = 500;        // linear-complexity block length
};

struct Level1Result {
    TestId test = TestId::frequency;
    int variant = 1;
    double statistic = 0.0;
    double p_value = 1.0;
    uint64_t n = 0;
};

Level1Result frequency_test(const BitSequence& seq, const Level1Params& params = {});
Level1Result binary_matrix_rank_test(const BitSequence& seq, const Level1Params& params = {});

Level1Result run_level1(TestId id, const BitSequence& seq, int variant = 1,
                        const Level1Params& params = {});

namespace level1_detail {

// Rank of a 32x32 GF(2) matrix given bit-packed rows.
int gf2_rank32(std::array<uint32_t, 32> rows);

// Aperiodic (unbordered) templates of length m, MSB-first, ascending.
std::vector<uint32_t> nonoverlap_templates(int m);

// Shortest LFSR length reproducing seq[start .. start+len).
int berlekamp_massey(const BitSequence& seq, uint64_t start, uint64_t len);

// SP800-22 cumulative-sums p-value for max excursion z over n steps.
double cusum_pvalue(uint64_t n, uint64_t z);

struct UniversalPlan { int L; int Q; uint64_t K; };
UniversalPlan universal_plan(uint64_t n, const Level1Params& params);

int serial_default_m(uint64_t n);
int apen_default_m(uint64_t n);

}

}
