#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ks2 {

// Packed binary sequence. Bit i lives in words[i >> 6] at bit position
// (i & 63), LSB first, so generation order matches in-word bit order.
class BitSequence {
public:
    BitSequence() = default;

    explicit BitSequence(uint64_t n) : n_(n), words_((n + 63) / 64, 0) {
        if (n == 0) throw std::invalid_argument("BitSequence: n must be >= 1");
    }

    static BitSequence from_string(const std::string& s) {
        BitSequence b(s.size());
        for (size_t i = 0; i < s.size(); i++) {
            if (s[i] != '0' && s[i] != '1')
                throw std::invalid_argument("BitSequence: bits must be 0 or 1");
            if (s[i] == '1') b.set(i);
        }
        return b;
    }

    uint64_t size() const { return n_; }

    int bit(uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

    void set(uint64_t i) { words_[i >> 6] |= uint64_t(1) << (i & 63); }

    void assign(uint64_t i, int v) {
        if (v) words_[i >> 6] |= uint64_t(1) << (i & 63);
        else   words_[i >> 6] &= ~(uint64_t(1) << (i & 63));
    }

    uint64_t ones() const {
        uint64_t c = 0;
        for (size_t w = 0; w + 1 < words_.size(); w++) c += std::popcount(words_[w]);
        if (!words_.empty()) c += std::popcount(last_word_masked());
        return c;
    }

    const std::vector<uint64_t>& words() const { return words_; }
    std::vector<uint64_t>& words() { return words_; }

    // Bits past n in the last word are kept zero by construction; mask anyway
    // so popcount stays correct even after raw word writes.
    uint64_t last_word_masked() const {
        uint64_t w = words_.back();
        unsigned rem = n_ & 63;
        if (rem) w &= (uint64_t(1) << rem) - 1;
        return w;
    }

    void mask_last_word() { words_.back() = last_word_masked(); }

    bool operator==(const BitSequence& o) const = default;

private:
    uint64_t n_ = 0;
    std::vector<uint64_t> words_;
};

}
