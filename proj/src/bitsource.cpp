#include "ks2/bitsource.hpp"

#include "ks2/mt19937_64.hpp"
#include "ks2/quadratic.hpp"

#include <gmpxx.h>

#include <stdexcept>

namespace ks2 {

std::string to_string(GeneratorSpec::Kind kind) {
    switch (kind) {
        case GeneratorSpec::Kind::baseline: return "baseline";
        case GeneratorSpec::Kind::true_orbit: return "true-orbit";
        case GeneratorSpec::Kind::rational_debug: return "rational";
    }
    return "?";
}

GeneratorSpec::Kind kind_from_string(const std::string& name) {
    if (name == "baseline") return GeneratorSpec::Kind::baseline;
    if (name == "true-orbit") return GeneratorSpec::Kind::true_orbit;
    if (name == "rational") return GeneratorSpec::Kind::rational_debug;
    throw std::invalid_argument("unknown generator kind: " + name);
}

std::string GeneratorSpec::describe() const {
    switch (kind) {
        case Kind::baseline:
            return "baseline(seed=" + std::to_string(seed) + ")";
        case Kind::true_orbit:
            return "true-orbit(index=" + std::to_string(orbit_index) + ")";
        case Kind::rational_debug:
            return "rational(" + std::to_string(num) + "/" + std::to_string(den) + ")";
    }
    return "?";
}

namespace {

void check_n(const GeneratorSpec& spec) {
    if (spec.n == 0) throw std::invalid_argument("GeneratorSpec: n must be >= 1");
}

BitSequence orbit_bits_by_stepping(QuadraticIrrational x, uint64_t n) {
    BitSequence out(n);
    for (uint64_t i = 0; i < n; i++) {
        if (orbit_bit(x)) out.set(i);
        if (i + 1 < n) x = orbit_step(x);
    }
    return out;
}

QuadraticIrrational initial_state(const GeneratorSpec& spec) {
    if (spec.kind == GeneratorSpec::Kind::rational_debug) {
        if (spec.den == 0 || spec.num >= spec.den)
            throw std::invalid_argument("rational debug state must satisfy 0 <= num < den");
        return QuadraticIrrational(mpz_class(static_cast<unsigned long>(spec.num)), 0,
                                   mpz_class(static_cast<unsigned long>(spec.den)), 2);
    }
    return sqrt_fractional_part(squarefree_nonsquare(spec.orbit_index));
}

}

BitSequence generate_baseline(const GeneratorSpec& spec) {
    if (spec.kind != GeneratorSpec::Kind::baseline)
        throw std::invalid_argument("generate_baseline: wrong generator kind");
    check_n(spec);
    BitSequence out(spec.n);
    Mt19937_64 rng(spec.seed);
    auto& words = out.words();
    for (auto& w : words) w = rng.next();
    unsigned rem = spec.n & 63;
    if (rem) words.back() &= (uint64_t(1) << rem) - 1;
    return out;
}

BitSequence generate_true_orbit(const GeneratorSpec& spec) {
    check_n(spec);
    if (spec.kind == GeneratorSpec::Kind::rational_debug)
        return orbit_bits_by_stepping(initial_state(spec), spec.n);
    if (spec.kind != GeneratorSpec::Kind::true_orbit)
        throw std::invalid_argument("generate_true_orbit: wrong generator kind");

    // bit i of frac(sqrt(D)) is bit (n-1-i) of floor(2^n sqrt(D)) mod 2^n
    uint64_t D = squarefree_nonsquare(spec.orbit_index);
    uint64_t n = spec.n;
    mpz_class shifted = mpz_class(static_cast<unsigned long>(D)) << (2 * n);
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), shifted.get_mpz_t());
    mpz_class frac = root & ((mpz_class(1) << n) - 1);

    BitSequence out(n);
    for (uint64_t i = 0; i < n; i++)
        if (mpz_tstbit(frac.get_mpz_t(), static_cast<mp_bitcnt_t>(n - 1 - i))) out.set(i);
    return out;
}

BitSequence generate(const GeneratorSpec& spec) {
    if (spec.kind == GeneratorSpec::Kind::baseline) return generate_baseline(spec);
    return generate_true_orbit(spec);
}

BitSequence generate_orbit_by_stepping(const GeneratorSpec& spec) {
    check_n(spec);
    if (spec.kind == GeneratorSpec::Kind::baseline)
        throw std::invalid_argument("generate_orbit_by_stepping: wrong generator kind");
    return orbit_bits_by_stepping(initial_state(spec), spec.n);
}

}
