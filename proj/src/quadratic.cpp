#include "ks2/quadratic.hpp"

#include <mutex>
#include <stdexcept>
#include <vector>

namespace ks2 {

namespace {

void reduce(mpz_class& a, mpz_class& b, mpz_class& c) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g > 1) { a /= g; b /= g; c /= g; }
}

}

int quad_sign(const mpz_class& a, const mpz_class& b, uint64_t D) {
    int sa = sgn(a), sb = sgn(b);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare a^2 against b^2 * D; the larger magnitude wins.
    mpz_class lhs = a * a, rhs = b * b * mpz_class(D);
    int c = cmp(lhs, rhs);
    if (c == 0) return 0;  // only possible when sqrt(D) is rational
    return (c > 0) ? sa : sb;
}

QuadraticIrrational::QuadraticIrrational(mpz_class a_, mpz_class b_, mpz_class c_, uint64_t D_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), D(D_) {
    if (c <= 0) throw std::invalid_argument("QuadraticIrrational: c must be > 0");
    reduce(a, b, c);
    if (quad_sign(a, b, D) < 0)
        throw std::invalid_argument("QuadraticIrrational: value must be >= 0");
    if (quad_sign(a - c, b, D) >= 0)
        throw std::invalid_argument("QuadraticIrrational: value must be < 1");
}

int orbit_bit(const QuadraticIrrational& x) {
    // x >= 1/2  <=>  2a - c + 2b*sqrt(D) >= 0
    mpz_class p = 2 * x.a - x.c, q = 2 * x.b;
    return quad_sign(p, q, x.D) >= 0 ? 1 : 0;
}

QuadraticIrrational orbit_step(const QuadraticIrrational& x) {
    // 2x in [0,2); subtract 1 exactly when 2x >= 1, which is orbit_bit(x).
    mpz_class a2 = 2 * x.a - (orbit_bit(x) ? x.c : mpz_class(0));
    return QuadraticIrrational(a2, 2 * x.b, x.c, x.D);
}

QuadraticIrrational sqrt_fractional_part(uint64_t D) {
    mpz_class d(static_cast<unsigned long>(D)), r;
    mpz_sqrt(r.get_mpz_t(), d.get_mpz_t());
    if (r * r == d) throw std::invalid_argument("sqrt_fractional_part: D is a perfect square");
    return QuadraticIrrational(-r, 1, 1, D);
}

uint64_t squarefree_nonsquare(uint64_t j) {
    if (j == 0) throw std::invalid_argument("squarefree_nonsquare: index is 1-based");
    static std::mutex mu;
    static std::vector<uint64_t> cache;
    static uint64_t next_v = 2;
    std::lock_guard<std::mutex> lock(mu);
    while (cache.size() < j) {
        uint64_t v = next_v++;
        bool squarefree = true;
        for (uint64_t p = 2; p * p <= v; p++) {
            if (v % (p * p) == 0) { squarefree = false; break; }
        }
        if (squarefree) cache.push_back(v);
    }
    return cache[j - 1];
}

}
