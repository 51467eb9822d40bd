#include "doctest.h"

#include "ks2/bitseq.hpp"

using ks2::BitSequence;

TEST_CASE("bit layout is LSB-first within 64-bit words") {
    BitSequence b(130);
    b.set(0);
    b.set(63);
    b.set(64);
    b.set(129);
    CHECK(b.words()[0] == ((uint64_t(1) << 63) | 1));
    CHECK(b.words()[1] == 1);
    CHECK(b.words()[2] == 2);
    CHECK(b.bit(0) == 1);
    CHECK(b.bit(1) == 0);
    CHECK(b.bit(63) == 1);
    CHECK(b.bit(64) == 1);
    CHECK(b.bit(129) == 1);
}

TEST_CASE("from_string round-trips and validates") {
    BitSequence b = BitSequence::from_string("0110101");
    CHECK(b.size() == 7);
    CHECK(b.bit(0) == 0);
    CHECK(b.bit(1) == 1);
    CHECK(b.bit(2) == 1);
    CHECK(b.bit(6) == 1);
    CHECK(b.ones() == 4);
    CHECK_THROWS_AS(BitSequence::from_string("01x"), std::invalid_argument);
}

TEST_CASE("empty sequences are rejected") {
    CHECK_THROWS_AS(BitSequence(0), std::invalid_argument);
    CHECK_THROWS_AS(BitSequence::from_string(""), std::invalid_argument);
}

TEST_CASE("ones ignores stray bits past n") {
    BitSequence b(10);
    b.words()[0] = ~uint64_t(0);
    CHECK(b.ones() == 10);
    b.mask_last_word();
    CHECK(b.words()[0] == 0x3FF);
}

TEST_CASE("assign clears and sets") {
    BitSequence b(8);
    b.assign(3, 1);
    CHECK(b.bit(3) == 1);
    b.assign(3, 0);
    CHECK(b.bit(3) == 0);
    CHECK(b.ones() == 0);
}

TEST_CASE("equality is value equality") {
    BitSequence a = BitSequence::from_string("1010");
    BitSequence b = BitSequence::from_string("1010");
    BitSequence c = BitSequence::from_string("1011");
    CHECK(a == b);
    CHECK(a != c);
}
