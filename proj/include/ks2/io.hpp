#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ks2/bitseq.hpp"
#include "ks2/bitsource.hpp"
#include "ks2/step_distribution.hpp"

namespace ks2::io {

// Atomically replaces `path` with `bytes` (temp file + rename in the same directory).
void atomic_write(const std::filesystem::path& path, const std::string& bytes);

// Bit-packed layout: sequence bit i lives in byte i>>3 at bit position i&7;
// the final byte is zero-padded past bit n-1.
std::vector<std::uint8_t> pack_bits(const BitSequence& seq);
BitSequence unpack_bits(const std::vector<std::uint8_t>& bytes, std::uint64_t n);

// Sequence file plus JSON sidecar at path + ".json" (kind, seed or orbit index, n).
void write_sequence(const std::filesystem::path& path, const BitSequence& seq,
                    const GeneratorSpec& spec);
BitSequence read_sequence(const std::filesystem::path& path);

struct PValueMeta {
    std::string test;
    int variant = 1;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::string generator;
    std::string version;
};

// P-value file: consecutive little-endian 64-bit IEEE doubles, sidecar at path + ".json".
void write_pvalues(const std::filesystem::path& path, const std::vector<double>& values,
                   const PValueMeta& meta);
std::vector<double> read_pvalues(const std::filesystem::path& path);
PValueMeta read_pvalue_meta(const std::filesystem::path& path);

// Text table "value mass cumulative", one atom per line, 17 significant digits.
void export_step_distribution(const std::filesystem::path& path, const StepDistribution& dist);

}  // namespace ks2::io
