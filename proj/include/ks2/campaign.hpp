#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ks2/bitsource.hpp"
#include "ks2/kstest.hpp"
#include "ks2/level1.hpp"
#include "ks2/step_distribution.hpp"
#include "ks2/theory.hpp"

namespace ks2 {

// Deterministic per-work-item seeding: seed(rep, idx) = mix(master, rep, idx)
// where mix feeds master, rep and idx through three splitmix64 rounds.
// Re-running any subset of work items reproduces their exact sequences.
struct SeedPolicy {
    uint64_t master = 0;
    uint64_t at(uint64_t rep, uint64_t idx) const;
};

enum class Exec { serial, parallel };

struct CampaignConfig {
    TestId test = TestId::frequency;
    int variant = 1;
    Level1Params params{};

    GeneratorSpec::Kind generator = GeneratorSpec::Kind::baseline;
    uint64_t master_seed = 1;       // baseline generator
    uint64_t first_orbit_index = 1; // true-orbit generator, 1-based

    uint64_t n = 1000;        // sequence length
    uint64_t m = 10;          // first-level sample size per repetition
    uint64_t m_prime = 0;     // reference sample size
    uint64_t repetitions = 1;
    std::vector<double> alphas{0.01};

    Exec exec = Exec::parallel;
    int threads = 0;  // 0 = OpenMP default
};

// First-level p-values for `count` sequences of repetition `rep`, in index
// order. Baseline sequences draw seeds from the seed policy; true orbits use
// consecutive orbit indices first_orbit_index + rep*count + idx.
std::vector<double> level1_pvalues(const CampaignConfig& config, uint64_t rep, uint64_t count);

// Reference distribution from m' true-orbit sequences; persists the sorted
// sample (p-value file + sidecar) when out is non-empty.
PValueSample build_reference(const CampaignConfig& config,
                             const std::filesystem::path& out = {});

enum class SecondLevelMode { one_sample_uniform, one_sample_exact, two_sample };

struct RepetitionOutcome {
    double statistic = 0.0;
    double p_value = 1.0;
};

struct Aggregate {
    double mean = 0.0;
    double sd = 0.0;   // unbiased, (count-1) denominator
    double sem = 0.0;  // sd / sqrt(count)
};

Aggregate aggregate(const std::vector<double>& xs);

struct ExperimentResult {
    std::vector<RepetitionOutcome> reps;
    Aggregate statistic;
    Aggregate p_value;
    std::vector<double> alphas;
    std::vector<uint64_t> pass_counts;  // per alpha: reps with stat <= K(alpha)
};

// Per repetition: m fresh first-level p-values from the configured generator,
// then the selected second-level K-S test.
ExperimentResult run_second_level(const CampaignConfig& config, SecondLevelMode mode,
                                  const PValueSample* reference = nullptr);

struct DeltaResult {
    uint64_t m = 0;
    uint64_t trials = 0;
    Aggregate df;          // statistic vs uniform F
    Aggregate dg;          // statistic vs the generating distribution G
    double delta = 0.0;    // df.mean - dg.mean
    double delta_sem = 0.0;
    double d = 0.0;        // sup |G - F|
    double bound = 0.0;    // sqrt(m) * d
    uint64_t violations = 0;  // trials with D_F > D_G + bound
};

// Draws m p-values per trial from G (inverse CDF), computes the scaled K-S
// statistics D_F and D_G per trial, and aggregates.
DeltaResult monte_carlo_delta(const GeParams& g, uint64_t m, uint64_t trials,
                              const SeedPolicy& seeds, Exec exec = Exec::parallel,
                              int threads = 0);
DeltaResult monte_carlo_delta(const StepDistribution& g, uint64_t m, uint64_t trials,
                              const SeedPolicy& seeds, Exec exec = Exec::parallel,
                              int threads = 0);

// Executes a JSON manifest: builds references, runs second-level campaigns and
// delta studies, writes <out_dir>/report.json plus per-campaign plot data.
void run_manifest(const std::filesystem::path& manifest_path,
                  const std::filesystem::path& out_dir, int threads = 0);

}  // namespace ks2
