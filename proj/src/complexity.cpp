#include "ks2/level1.hpp"
#include "ks2/numerics.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ks2 {

namespace level1_detail {

namespace {

// dst ^= src << shift over word arrays (bit vectors of equal capacity).
void xor_shifted(std::vector<uint64_t>& dst, const std::vector<uint64_t>& src, uint64_t shift) {
    uint64_t ws = shift >> 6, bs = shift & 63;
    for (size_t i = dst.size(); i-- > ws;) {
        uint64_t v = src[i - ws] << bs;
        if (bs && i - ws > 0) v |= src[i - ws - 1] >> (64 - bs);
        dst[i] ^= v;
    }
}

}

int berlekamp_massey(const BitSequence& seq, uint64_t start, uint64_t len) {
    size_t words = size_t((len + 64) / 64) + 1;
    // rev[j] = s_{len-1-j}, so the discrepancy at step N is the parity of
    // C & (rev >> (len-1-N)) over the low L+1 bits (all of C, higher bits 0).
    std::vector<uint64_t> rev(words, 0);
    for (uint64_t j = 0; j < len; j++)
        if (seq.bit(start + len - 1 - j)) rev[j >> 6] |= uint64_t(1) << (j & 63);

    std::vector<uint64_t> C(words, 0), B(words, 0), T;
    C[0] = B[0] = 1;  // polynomials over GF(2), bit i = coefficient of x^i
    int L = 0;
    int64_t m = -1;
    for (uint64_t N = 0; N < len; N++) {
        uint64_t off = len - 1 - N, ws = off >> 6, bs = off & 63;
        size_t cwords = size_t(L >> 6) + 1;
        uint64_t acc = 0;
        for (size_t j = 0; j < cwords; j++) {
            uint64_t r = rev[j + ws] >> bs;
            if (bs && j + ws + 1 < words) r |= rev[j + ws + 1] << (64 - bs);
            acc ^= C[j] & r;
        }
        if (std::popcount(acc) & 1) {
            if (2 * L <= int64_t(N)) {
                T = C;
                xor_shifted(C, B, N - m);
                L = int(N) + 1 - L;
                m = int64_t(N);
                B = std::move(T);
            } else {
                xor_shifted(C, B, N - m);
            }
        }
    }
    return L;
}

}

Level1Result complexity_test_impl(const BitSequence& seq, const Level1Params& params) {
    uint64_t n = seq.size();
    uint64_t M = uint64_t(params.lc_M);
    if (M < 4) throw std::invalid_argument("linear-complexity: M must be >= 4");
    uint64_t N = n / M;
    if (N == 0) throw std::invalid_argument("linear-complexity: need at least one block");
    if (params.enforce_min_n && n < 1000000)
        throw std::invalid_argument("linear-complexity: n must be >= 10^6");

    constexpr int K = 6;
    const double pi[K + 1] = {0.010417, 0.03125, 0.125, 0.5, 0.25, 0.0625, 0.020833};
    double sign = (M % 2 == 0) ? 1.0 : -1.0;
    double mu = double(M) / 2.0 + (9.0 - sign) / 36.0 -
                (double(M) / 3.0 + 2.0 / 9.0) / std::pow(2.0, double(M));

    uint64_t nu[K + 1] = {};
    for (uint64_t b = 0; b < N; b++) {
        int L = level1_detail::berlekamp_massey(seq, b * M, M);
        double t = (M % 2 == 0 ? 1.0 : -1.0) * (double(L) - mu) + 2.0 / 9.0;
        int cls;
        if (t <= -2.5) cls = 0;
        else if (t <= -1.5) cls = 1;
        else if (t <= -0.5) cls = 2;
        else if (t <= 0.5) cls = 3;
        else if (t <= 1.5) cls = 4;
        else if (t <= 2.5) cls = 5;
        else cls = 6;
        nu[cls]++;
    }
    double chi2 = 0.0;
    for (int u = 0; u <= K; u++) {
        double expect = double(N) * pi[u];
        chi2 += (double(nu[u]) - expect) * (double(nu[u]) - expect) / expect;
    }
    return {TestId::linear_complexity, 1, chi2, igamc(double(K) / 2.0, chi2 / 2.0), n};
}

}
