#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ks2/bitsource.hpp"
#include "ks2/campaign.hpp"
#include "ks2/io.hpp"
#include "ks2/kstest.hpp"
#include "ks2/level1.hpp"
#include "ks2/numerics.hpp"
#include "ks2/theory.hpp"
#include "ks2/version.hpp"

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitRejected = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

using nlohmann::json;

struct GenerateFlags {
    std::string kind = "baseline";
    std::uint64_t seed = 0;
    std::uint64_t orbit_index = 1;
    std::uint64_t num = 0, den = 1;
    std::uint64_t n = 0;
    std::string out;
};

struct Level1Flags {
    std::string test = "frequency";
    int variant = 1;
    std::vector<std::string> inputs;
    std::string kind = "baseline";
    std::uint64_t seed = 1;
    std::uint64_t orbit_index = 1;
    std::uint64_t n = 0;
    std::uint64_t m = 1;
    std::string out;
    bool allow_short = false;
    int threads = 0;
};

struct Level2Flags {
    std::string pvals;
    std::string ref = "uniform";
    std::string exact_test;
    std::uint64_t exact_n = 0;
    double alpha = 0.01;
    std::string report;
};

struct TheoryFlags {
    std::string test;
    std::uint64_t n = 0;
    std::optional<double> e;
    std::optional<double> d;
    std::uint64_t m = 0;
    double delta = 0.0;
    std::string out;
};

struct CampaignFlags {
    std::string config;
    std::string out_dir;
    int threads = 0;
};

ks2::GeneratorSpec spec_from_flags(const std::string& kind, std::uint64_t seed,
                                   std::uint64_t orbit_index, std::uint64_t num,
                                   std::uint64_t den, std::uint64_t n) {
    ks2::GeneratorSpec spec;
    spec.kind = ks2::kind_from_string(kind);
    spec.seed = seed;
    spec.orbit_index = orbit_index;
    spec.num = num;
    spec.den = den;
    spec.n = n;
    return spec;
}

int cmd_generate(const GenerateFlags& f) {
    ks2::GeneratorSpec spec =
        spec_from_flags(f.kind, f.seed, f.orbit_index, f.num, f.den, f.n);
    ks2::BitSequence bits = spec.kind == ks2::GeneratorSpec::Kind::rational_debug
                                ? ks2::generate_orbit_by_stepping(spec)
                                : ks2::generate(spec);
    ks2::io::write_sequence(f.out, bits, spec);
    std::printf("wrote %" PRIu64 " bits from %s to %s\n", bits.size(), spec.describe().c_str(),
                f.out.c_str());
    return kExitSuccess;
}

ks2::TestId parse_test(const std::string& name) {
    auto id = ks2::test_from_name(name);
    if (!id) throw std::invalid_argument("unknown test: " + name);
    return *id;
}

int cmd_level1(const Level1Flags& f) {
    ks2::TestId test = parse_test(f.test);
    ks2::Level1Params params;
    params.enforce_min_n = !f.allow_short;

    std::vector<double> values;
    std::string generator;
    std::uint64_t n = 0;
    if (!f.inputs.empty()) {
        generator = "files";
        for (const auto& path : f.inputs) {
            ks2::BitSequence bits = ks2::io::read_sequence(path);
            n = bits.size();
            values.push_back(ks2::run_level1(test, bits, f.variant, params).p_value);
        }
    } else {
        if (f.n == 0) throw std::invalid_argument("generator mode needs --n");
        ks2::CampaignConfig config;
        config.test = test;
        config.variant = f.variant;
        config.params = params;
        config.generator = ks2::kind_from_string(f.kind);
        config.master_seed = f.seed;
        config.first_orbit_index = f.orbit_index;
        config.n = f.n;
        config.threads = f.threads;
        values = ks2::level1_pvalues(config, 0, f.m);
        generator = f.kind;
        n = f.n;
    }

    ks2::io::PValueMeta meta;
    meta.test = ks2::test_name(test);
    meta.variant = f.variant;
    meta.n = n;
    meta.m = values.size();
    meta.generator = generator;
    meta.version = ks2::version;
    ks2::io::write_pvalues(f.out, values, meta);
    std::printf("wrote %zu p-values (%s, variant %d, n=%" PRIu64 ") to %s\n", values.size(),
                meta.test.c_str(), f.variant, n, f.out.c_str());
    return kExitSuccess;
}

int cmd_level2(const Level2Flags& f) {
    std::vector<double> values = ks2::io::read_pvalues(f.pvals);
    ks2::PValueSample sample(values);

    ks2::KsResult result;
    std::string mode;
    ks2::StepDistribution exact;
    ks2::PValueSample reference;
    if (f.ref == "uniform") {
        mode = "one-sample-uniform";
        result = ks2::ks_one_sample(sample, ks2::ReferenceDistribution::make_uniform(), f.alpha);
    } else if (f.ref == "exact") {
        mode = "one-sample-exact";
        std::string test = f.exact_test;
        std::uint64_t n = f.exact_n;
        if (test.empty() || n == 0) {
            ks2::io::PValueMeta meta = ks2::io::read_pvalue_meta(f.pvals);
            if (test.empty()) test = meta.test;
            if (n == 0) n = meta.n;
        }
        ks2::TestId id = parse_test(test);
        if (id == ks2::TestId::frequency) exact = ks2::exact_distribution_frequency(n);
        else if (id == ks2::TestId::rank) exact = ks2::exact_distribution_rank(n);
        else throw std::invalid_argument("exact reference available only for frequency and rank");
        result = ks2::ks_one_sample(sample, ks2::ReferenceDistribution::make_step(exact), f.alpha);
    } else {
        mode = "two-sample";
        reference = ks2::PValueSample(ks2::io::read_pvalues(f.ref));
        result = ks2::ks_two_sample(sample, reference, f.alpha);
    }

    std::printf("mode       %s\n", mode.c_str());
    std::printf("m          %zu\n", sample.size());
    if (mode == "two-sample") std::printf("m'         %zu\n", reference.size());
    std::printf("statistic  %.4g\n", result.statistic);
    std::printf("p-value    %.4g\n", result.p_value);
    std::printf("boundary   %.4g (alpha %.4g)\n", ks2::ks_boundary(f.alpha), f.alpha);
    std::printf("decision   %s\n", result.accepted ? "accept" : "reject");

    if (!f.report.empty()) {
        json report;
        report["config"] = {{"p", f.pvals},     {"ref", f.ref},
                            {"mode", mode},     {"alpha", f.alpha},
                            {"exact_test", f.exact_test}, {"exact_n", f.exact_n}};
        report["m"] = sample.size();
        report["statistic"] = result.statistic;
        report["p_value"] = result.p_value;
        report["boundary"] = ks2::ks_boundary(f.alpha);
        report["accepted"] = result.accepted;
        report["version"] = ks2::version;
        ks2::io::atomic_write(f.report, report.dump(2) + "\n");
    }
    return result.accepted ? kExitSuccess : kExitRejected;
}

double theory_d(const TheoryFlags& f) {
    if (f.d) return *f.d;
    if (f.e) return ks2::compute_d(ks2::GeParams{*f.e}).d;
    if (f.test.empty() || f.n == 0)
        throw std::invalid_argument("need --d, --e, or --test with --n");
    ks2::TestId id = parse_test(f.test);
    if (id == ks2::TestId::frequency)
        return ks2::compute_d(ks2::exact_distribution_frequency(f.n)).d;
    if (id == ks2::TestId::rank) return ks2::compute_d(ks2::exact_distribution_rank(f.n)).d;
    throw std::invalid_argument("exact distribution available only for frequency and rank");
}

int cmd_theory_compute_d(const TheoryFlags& f) {
    std::printf("d = %.17g\n", theory_d(f));
    return kExitSuccess;
}

int cmd_theory_delta_bound(const TheoryFlags& f) {
    if (f.m == 0) throw std::invalid_argument("need --m");
    std::printf("sqrt(m)*d = %.17g\n", ks2::delta_bound(f.m, theory_d(f)));
    return kExitSuccess;
}

int cmd_theory_safe_sample_size(const TheoryFlags& f) {
    auto size = ks2::safe_sample_size(f.delta, theory_d(f));
    if (!size) {
        std::printf("unbounded (d = 0)\n");
        return kExitSuccess;
    }
    std::printf("(delta/d)^2 = %" PRIu64 "\n", *size);
    return kExitSuccess;
}

int cmd_theory_mu() {
    std::printf("mu = %.17g\n", ks2::mu_constant());
    return kExitSuccess;
}

int cmd_theory_export_dist(const TheoryFlags& f) {
    if (f.out.empty()) throw std::invalid_argument("need --out");
    ks2::TestId id = parse_test(f.test);
    ks2::StepDistribution dist;
    if (id == ks2::TestId::frequency) dist = ks2::exact_distribution_frequency(f.n);
    else if (id == ks2::TestId::rank) dist = ks2::exact_distribution_rank(f.n);
    else throw std::invalid_argument("exact distribution available only for frequency and rank");
    ks2::io::export_step_distribution(f.out, dist);
    std::printf("wrote %zu atoms to %s\n", dist.size(), f.out.c_str());
    return kExitSuccess;
}

int cmd_campaign(const CampaignFlags& f) {
    std::string out_dir = f.out_dir;
    if (out_dir.empty()) {
        const char* env = std::getenv("KS2_OUT_DIR");
        if (env) out_dir = env;
    }
    if (out_dir.empty())
        throw std::invalid_argument("need --out-dir (or KS2_OUT_DIR in the environment)");
    ks2::run_manifest(f.config, out_dir, f.threads);
    std::printf("report written to %s\n",
                (std::filesystem::path(out_dir) / "report.json").string().c_str());
    return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Second-level randomness testing toolkit"};
    app.set_version_flag("--version", std::string(ks2::version));
    app.require_subcommand(1);

    GenerateFlags gen;
    auto* generate = app.add_subcommand("generate", "Write a bit sequence file");
    generate->add_option("--kind", gen.kind, "baseline | true-orbit | rational")
        ->check(CLI::IsMember({"baseline", "true-orbit", "rational"}));
    generate->add_option("--seed", gen.seed, "baseline seed");
    generate->add_option("--orbit-index", gen.orbit_index, "1-based true-orbit index");
    generate->add_option("--num", gen.num, "rational debug numerator");
    generate->add_option("--den", gen.den, "rational debug denominator");
    generate->add_option("--n", gen.n, "sequence length in bits")->required();
    generate->add_option("--out", gen.out, "output file")->required();

    Level1Flags l1;
    auto* level1 = app.add_subcommand("level1", "Run a first-level test, emit p-values");
    level1->add_option("--test", l1.test, "test name")->required();
    level1->add_option("--variant", l1.variant, "1-based output variant");
    level1->add_option("--in", l1.inputs, "sequence files (else generator flags)");
    level1->add_option("--kind", l1.kind, "baseline | true-orbit");
    level1->add_option("--seed", l1.seed, "baseline master seed");
    level1->add_option("--orbit-index", l1.orbit_index, "first orbit index");
    level1->add_option("--n", l1.n, "sequence length in bits");
    level1->add_option("--m", l1.m, "number of sequences");
    level1->add_option("--out", l1.out, "p-value output file")->required();
    level1->add_flag("--allow-short", l1.allow_short, "skip recommended-length checks");
    level1->add_option("--threads", l1.threads, "worker threads (0 = default)");

    Level2Flags l2;
    auto* level2 = app.add_subcommand("level2", "Second-level K-S test on a p-value file");
    level2->add_option("--p", l2.pvals, "p-value file")->required();
    level2->add_option("--ref", l2.ref, "uniform | exact | reference p-value file");
    level2->add_option("--exact-test", l2.exact_test, "test for --ref exact (default: sidecar)");
    level2->add_option("--exact-n", l2.exact_n, "n for --ref exact (default: sidecar)");
    level2->add_option("--alpha", l2.alpha, "significance level");
    level2->add_option("--json", l2.report, "write a machine report here");

    TheoryFlags th;
    auto* theory = app.add_subcommand("theory", "Deviation bounds and constants");
    theory->require_subcommand(1);
    auto add_d_flags = [&th](CLI::App* cmd) {
        cmd->add_option("--test", th.test, "frequency | rank");
        cmd->add_option("--n", th.n, "sequence length in bits");
        cmd->add_option("--e", th.e, "toy-distribution deviation");
        cmd->add_option("--d", th.d, "deviation value directly");
    };
    auto* compute_d = theory->add_subcommand("compute-d", "sup |G - F| against the uniform");
    add_d_flags(compute_d);
    auto* delta_bound = theory->add_subcommand("delta-bound", "sqrt(m) * d");
    add_d_flags(delta_bound);
    delta_bound->add_option("--m", th.m, "sample size");
    auto* safe_size = theory->add_subcommand("safe-sample-size", "floor((delta/d)^2)");
    add_d_flags(safe_size);
    safe_size->add_option("--delta", th.delta, "admissible bias")->required();
    auto* mu = theory->add_subcommand("mu", "large-m mean of the K-S statistic");
    auto* export_dist = theory->add_subcommand("export-dist", "write a step distribution table");
    export_dist->add_option("--test", th.test, "frequency | rank")->required();
    export_dist->add_option("--n", th.n, "sequence length in bits")->required();
    export_dist->add_option("--out", th.out, "output text file");

    CampaignFlags camp;
    auto* campaign = app.add_subcommand("campaign", "Execute a JSON campaign manifest");
    campaign->add_option("--config", camp.config, "manifest path")->required();
    campaign->add_option("--out-dir", camp.out_dir, "output directory (default: KS2_OUT_DIR)");
    campaign->add_option("--threads", camp.threads, "worker threads (0 = default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitSuccess : kExitUsage;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen);
        if (level1->parsed()) return cmd_level1(l1);
        if (level2->parsed()) return cmd_level2(l2);
        if (theory->parsed()) {
            if (compute_d->parsed()) return cmd_theory_compute_d(th);
            if (delta_bound->parsed()) return cmd_theory_delta_bound(th);
            if (safe_size->parsed()) return cmd_theory_safe_sample_size(th);
            if (mu->parsed()) return cmd_theory_mu();
            if (export_dist->parsed()) return cmd_theory_export_dist(th);
        }
        if (campaign->parsed()) return cmd_campaign(camp);
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
