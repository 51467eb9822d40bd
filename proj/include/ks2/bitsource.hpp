#pragma once

#include "ks2/bitseq.hpp"

#include <cstdint>
#include <string>

namespace ks2 {

// Identifies a reproducible sequence: same spec, same bits.
struct GeneratorSpec {
    enum class Kind { baseline, true_orbit, rational_debug };

    Kind kind = Kind::baseline;
    uint64_t seed = 0;         // baseline only
    uint64_t orbit_index = 1;  // true_orbit only, 1-based
    // rational_debug only: x0 = num/den with 0 <= num < den
    uint64_t num = 0, den = 1;
    uint64_t n = 0;

    std::string describe() const;
};

std::string to_string(GeneratorSpec::Kind kind);
GeneratorSpec::Kind kind_from_string(const std::string& name);

// Dispatches on spec.kind (baseline or digit-extraction true orbit).
BitSequence generate(const GeneratorSpec& spec);

// MT19937-64 bits, word i contributing bits 64i..64i+63 LSB first.
BitSequence generate_baseline(const GeneratorSpec& spec);

// Binary expansion of x0 = frac(sqrt(D_j)) (or num/den in rational debug
// mode), computed with the integer-square-root digit extraction.
BitSequence generate_true_orbit(const GeneratorSpec& spec);

// Same sequence produced by exact Bernoulli-map stepping; O(n^2) reference
// used to cross-check the digit-extraction path.
BitSequence generate_orbit_by_stepping(const GeneratorSpec& spec);

}
