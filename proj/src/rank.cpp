#include "ks2/level1.hpp"
#include "ks2/numerics.hpp"
#include "ks2/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace ks2 {

namespace level1_detail {

int gf2_rank32(std::array<uint32_t, 32> rows) {
    int rank = 0;
    for (int col = 31; col >= 0 && rank < 32; col--) {
        uint32_t mask = uint32_t(1) << col;
        int pivot = -1;
        for (int r = rank; r < 32; r++)
            if (rows[r] & mask) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int r = pivot + 1; r < 32; r++)
            if (rows[r] & mask) rows[r] ^= rows[rank];
        rank++;
    }
    return rank;
}

}

Level1Result rank_test_impl(const BitSequence& seq, const Level1Params&) {
    uint64_t n = seq.size();
    uint64_t N = n / 1024;
    if (N == 0) throw std::invalid_argument("rank: need n >= 1024");
    uint64_t counts[3] = {0, 0, 0};  // full, full-1, lower
    for (uint64_t mtx = 0; mtx < N; mtx++) {
        std::array<uint32_t, 32> rows{};
        for (int r = 0; r < 32; r++) {
            uint32_t w = 0;
            uint64_t base = mtx * 1024 + uint64_t(r) * 32;
            for (int c = 0; c < 32; c++) w = (w << 1) | uint32_t(seq.bit(base + c));
            rows[r] = w;
        }
        int rk = level1_detail::gf2_rank32(rows);
        counts[rk == 32 ? 0 : (rk == 31 ? 1 : 2)]++;
    }
    auto pi = gf2_rank_class_probs(32);
    double chi2 = 0.0;
    for (int i = 0; i < 3; i++) {
        double expect = double(N) * pi[i];
        chi2 += (double(counts[i]) - expect) * (double(counts[i]) - expect) / expect;
    }
    return {TestId::rank, 1, chi2, std::exp(-chi2 / 2.0), n};
}

}
