#pragma once

#include <cstdint>

namespace ks2 {

// 64-bit Mersenne Twister, written out from the published algorithm
// (Nishimura & Matsumoto's mt19937-64: state 312 words, shift 156).
class Mt19937_64 {
public:
    explicit Mt19937_64(uint64_t seed) { reseed(seed); }

    void reseed(uint64_t seed) {
        mt_[0] = seed;
        for (int i = 1; i < NN; i++)
            mt_[i] = 6364136223846793005ULL * (mt_[i - 1] ^ (mt_[i - 1] >> 62)) + uint64_t(i);
        mti_ = NN;
    }

    uint64_t next() {
        if (mti_ >= NN) refill();
        uint64_t x = mt_[mti_++];
        x ^= (x >> 29) & 0x5555555555555555ULL;
        x ^= (x << 17) & 0x71D67FFFEDA60000ULL;
        x ^= (x << 37) & 0xFFF7EEE000000000ULL;
        x ^= x >> 43;
        return x;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return double(next() >> 11) * 0x1.0p-53; }

private:
    static constexpr int NN = 312;
    static constexpr int MM = 156;
    static constexpr uint64_t MATRIX_A = 0xB5026F5AA96619E9ULL;
    static constexpr uint64_t UM = 0xFFFFFFFF80000000ULL;
    static constexpr uint64_t LM = 0x7FFFFFFFULL;

    void refill() {
        for (int i = 0; i < NN; i++) {
            uint64_t x = (mt_[i] & UM) | (mt_[(i + 1) % NN] & LM);
            mt_[i] = mt_[(i + MM) % NN] ^ (x >> 1) ^ ((x & 1) ? MATRIX_A : 0);
        }
        mti_ = 0;
    }

    uint64_t mt_[NN];
    int mti_;
};

}
