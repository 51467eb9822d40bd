#pragma once

#include <gmpxx.h>

#include <cstdint>

namespace ks2 {

// Exact state (a + b*sqrt(D)) / c with 0 <= x < 1, c > 0, gcd(a,b,c) = 1.
// D must be square-free and not a perfect square whenever b != 0; b = 0 is
// the rational debug case and D is then irrelevant.
struct QuadraticIrrational {
    mpz_class a, b, c;
    uint64_t D = 2;

    QuadraticIrrational(mpz_class a_, mpz_class b_, mpz_class c_, uint64_t D_);

    bool is_rational() const { return b == 0; }
};

// Sign of a + b*sqrt(D) as -1/0/+1, by exact integer comparison of squares.
int quad_sign(const mpz_class& a, const mpz_class& b, uint64_t D);

// x >= 1/2 comparison, i.e. the symbol of the Bernoulli orbit at x.
int orbit_bit(const QuadraticIrrational& x);

// One Bernoulli step: 2x mod 1, exactly.
QuadraticIrrational orbit_step(const QuadraticIrrational& x);

// frac(sqrt(D)) as a QuadraticIrrational, D square-free non-square.
QuadraticIrrational sqrt_fractional_part(uint64_t D);

// j-th square-free non-square integer >= 2, 1-based (2, 3, 5, 6, 7, 10, ...).
uint64_t squarefree_nonsquare(uint64_t j);

}
