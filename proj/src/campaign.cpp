#include "ks2/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"

#include "ks2/io.hpp"
#include "ks2/mt19937_64.hpp"
#include "ks2/numerics.hpp"
#include "ks2/version.hpp"

namespace ks2 {
namespace {

uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

// Runs work(i) for i in [0, count); exec chooses the plain loop or the OpenMP
// one. Work items are index-addressed, so scheduling cannot affect outputs.
template <typename Fn>
void for_each_index(uint64_t count, Exec exec, int threads, Fn&& work) {
    if (exec == Exec::serial) {
        for (uint64_t i = 0; i < count; i++) work(i);
        return;
    }
#ifdef _OPENMP
    std::exception_ptr first_error = nullptr;
    const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (int64_t i = 0; i < int64_t(count); i++) {
        try {
            work(uint64_t(i));
        } catch (...) {
#pragma omp critical(ks2_campaign_error)
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
#else
    (void)threads;
    for (uint64_t i = 0; i < count; i++) work(i);
#endif
}

}  // namespace

uint64_t SeedPolicy::at(uint64_t rep, uint64_t idx) const {
    return mix64(mix64(mix64(master) ^ rep) ^ idx);
}

std::vector<double> level1_pvalues(const CampaignConfig& config, uint64_t rep, uint64_t count) {
    if (count == 0) throw std::invalid_argument("level1_pvalues: count must be >= 1");
    std::vector<double> out(count);
    const SeedPolicy seeds{config.master_seed};
    for_each_index(count, config.exec, config.threads, [&](uint64_t idx) {
        GeneratorSpec spec;
        spec.kind = config.generator;
        spec.n = config.n;
        if (config.generator == GeneratorSpec::Kind::baseline)
            spec.seed = seeds.at(rep, idx);
        else
            spec.orbit_index = config.first_orbit_index + rep * count + idx;
        BitSequence bits = generate(spec);
        out[idx] = run_level1(config.test, bits, config.variant, config.params).p_value;
    });
    return out;
}

PValueSample build_reference(const CampaignConfig& config, const std::filesystem::path& out) {
    if (config.generator != GeneratorSpec::Kind::true_orbit)
        throw std::invalid_argument("build_reference: generator must be true-orbit");
    if (config.m_prime == 0) throw std::invalid_argument("build_reference: m' must be >= 1");

    std::vector<double> values = level1_pvalues(config, 0, config.m_prime);
    std::sort(values.begin(), values.end());

    Provenance prov;
    prov.test = test_name(config.test);
    prov.variant = config.variant;
    prov.n = config.n;
    prov.generator = "true-orbit(first-index=" + std::to_string(config.first_orbit_index) + ")";

    if (!out.empty()) {
        io::PValueMeta meta;
        meta.test = prov.test;
        meta.variant = prov.variant;
        meta.n = config.n;
        meta.m = config.m_prime;
        meta.generator = prov.generator;
        meta.version = version;
        io::write_pvalues(out, values, meta);
    }
    return PValueSample(std::move(values), std::move(prov));
}

Aggregate aggregate(const std::vector<double>& xs) {
    Aggregate a;
    if (xs.empty()) return a;
    double sum = 0.0;
    for (double x : xs) sum += x;
    a.mean = sum / double(xs.size());
    if (xs.size() < 2) return a;
    double ss = 0.0;
    for (double x : xs) ss += (x - a.mean) * (x - a.mean);
    a.sd = std::sqrt(ss / double(xs.size() - 1));
    a.sem = a.sd / std::sqrt(double(xs.size()));
    return a;
}

ExperimentResult run_second_level(const CampaignConfig& config, SecondLevelMode mode,
                                  const PValueSample* reference) {
    if (config.repetitions == 0)
        throw std::invalid_argument("run_second_level: repetitions must be >= 1");
    if (config.alphas.empty())
        throw std::invalid_argument("run_second_level: need at least one alpha");
    if (mode == SecondLevelMode::two_sample && reference == nullptr)
        throw std::invalid_argument("run_second_level: two-sample mode needs a reference");

    StepDistribution exact;
    if (mode == SecondLevelMode::one_sample_exact) {
        if (config.test == TestId::frequency)
            exact = exact_distribution_frequency(config.n);
        else if (config.test == TestId::rank)
            exact = exact_distribution_rank(config.n);
        else
            throw std::invalid_argument(
                "run_second_level: exact distribution available only for frequency and rank");
    }

    Provenance prov;
    prov.test = test_name(config.test);
    prov.variant = config.variant;
    prov.n = config.n;

    ExperimentResult result;
    result.alphas = config.alphas;
    result.pass_counts.assign(config.alphas.size(), 0);

    std::vector<double> stats, pvals;
    for (uint64_t rep = 0; rep < config.repetitions; rep++) {
        PValueSample sample(level1_pvalues(config, rep, config.m), prov);
        KsResult ks;
        switch (mode) {
            case SecondLevelMode::one_sample_uniform:
                ks = ks_one_sample(sample, ReferenceDistribution::make_uniform(),
                                   config.alphas.front());
                break;
            case SecondLevelMode::one_sample_exact:
                ks = ks_one_sample(sample, ReferenceDistribution::make_step(exact),
                                   config.alphas.front());
                break;
            case SecondLevelMode::two_sample:
                ks = ks_two_sample(sample, *reference, config.alphas.front());
                break;
        }
        result.reps.push_back({ks.statistic, ks.p_value});
        stats.push_back(ks.statistic);
        pvals.push_back(ks.p_value);
        for (size_t a = 0; a < config.alphas.size(); a++)
            if (ks.statistic <= ks_boundary(config.alphas[a])) result.pass_counts[a]++;
    }
    result.statistic = aggregate(stats);
    result.p_value = aggregate(pvals);
    return result;
}

namespace {

// Shared Monte Carlo driver; Sample(u) inverts G, SupG(sorted) is the
// unscaled sup distance against G.
template <typename Sample, typename SupG>
DeltaResult mc_delta(double d, uint64_t m, uint64_t trials, const SeedPolicy& seeds, Exec exec,
                     int threads, Sample&& sample_one, SupG&& sup_g) {
    if (m == 0) throw std::invalid_argument("monte_carlo_delta: m must be >= 1");
    if (trials < 2) throw std::invalid_argument("monte_carlo_delta: trials must be >= 2");

    const double root_m = std::sqrt(double(m));
    const double bound = root_m * d;

    std::vector<double> df(trials), dg(trials);
    std::vector<uint8_t> violated(trials, 0);
    for_each_index(trials, exec, threads, [&](uint64_t t) {
        Mt19937_64 rng(seeds.at(t, 0));
        std::vector<double> values(m);
        for (auto& v : values) v = sample_one(rng.next_double());
        std::sort(values.begin(), values.end());
        df[t] = root_m * ks_sup_uniform(values);
        dg[t] = root_m * sup_g(values);
        // the triangle inequality is exact; tolerance covers rounding only
        if (df[t] > dg[t] + bound + 1e-9) violated[t] = 1;
    });

    DeltaResult result;
    result.m = m;
    result.trials = trials;
    result.df = aggregate(df);
    result.dg = aggregate(dg);
    std::vector<double> diffs(trials);
    for (uint64_t t = 0; t < trials; t++) diffs[t] = df[t] - dg[t];
    Aggregate diff_agg = aggregate(diffs);
    result.delta = diff_agg.mean;
    result.delta_sem = diff_agg.sem;
    result.d = d;
    result.bound = bound;
    for (uint8_t v : violated) result.violations += v;
    return result;
}

}  // namespace

DeltaResult monte_carlo_delta(const GeParams& g, uint64_t m, uint64_t trials,
                              const SeedPolicy& seeds, Exec exec, int threads) {
    return mc_delta(
        compute_d(g).d, m, trials, seeds, exec, threads,
        [&](double u) { return ge_sample(g, u); },
        [&](const std::vector<double>& sorted) {
            return ks_sup_continuous(sorted, [&](double x) { return ge_cdf(g, x); });
        });
}

DeltaResult monte_carlo_delta(const StepDistribution& g, uint64_t m, uint64_t trials,
                              const SeedPolicy& seeds, Exec exec, int threads) {
    return mc_delta(
        compute_d(g).d, m, trials, seeds, exec, threads,
        [&](double u) { return g.sample(u); },
        [&](const std::vector<double>& sorted) { return ks_sup_step(sorted, g); });
}

namespace {

using nlohmann::json;

Level1Params parse_params(const json& j) {
    Level1Params p;
    if (!j.contains("params")) return p;
    const json& q = j.at("params");
    if (q.contains("enforce_min_n")) p.enforce_min_n = q.at("enforce_min_n").get<bool>();
    if (q.contains("block_frequency_M")) p.block_frequency_M = q.at("block_frequency_M").get<int>();
    if (q.contains("nonoverlap_m")) p.nonoverlap_m = q.at("nonoverlap_m").get<int>();
    if (q.contains("nonoverlap_N")) p.nonoverlap_N = q.at("nonoverlap_N").get<int>();
    if (q.contains("overlap_m")) p.overlap_m = q.at("overlap_m").get<int>();
    if (q.contains("overlap_M")) p.overlap_M = q.at("overlap_M").get<int>();
    if (q.contains("universal_L")) p.universal_L = q.at("universal_L").get<int>();
    if (q.contains("universal_Q")) p.universal_Q = q.at("universal_Q").get<int>();
    if (q.contains("serial_m")) p.serial_m = q.at("serial_m").get<int>();
    if (q.contains("apen_m")) p.apen_m = q.at("apen_m").get<int>();
    if (q.contains("lc_M")) p.lc_M = q.at("lc_M").get<int>();
    return p;
}

CampaignConfig parse_config(const json& j, int default_threads) {
    CampaignConfig c;
    if (j.contains("test")) {
        auto id = test_from_name(j.at("test").get<std::string>());
        if (!id) throw std::invalid_argument("unknown test: " + j.at("test").get<std::string>());
        c.test = *id;
    }
    if (j.contains("variant")) c.variant = j.at("variant").get<int>();
    c.params = parse_params(j);
    if (j.contains("generator")) c.generator = kind_from_string(j.at("generator").get<std::string>());
    if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<uint64_t>();
    if (j.contains("first_orbit_index"))
        c.first_orbit_index = j.at("first_orbit_index").get<uint64_t>();
    if (j.contains("n")) c.n = j.at("n").get<uint64_t>();
    if (j.contains("m")) c.m = j.at("m").get<uint64_t>();
    if (j.contains("m_prime")) c.m_prime = j.at("m_prime").get<uint64_t>();
    if (j.contains("repetitions")) c.repetitions = j.at("repetitions").get<uint64_t>();
    if (j.contains("alphas")) c.alphas = j.at("alphas").get<std::vector<double>>();
    if (j.contains("exec")) {
        std::string e = j.at("exec").get<std::string>();
        if (e == "serial") c.exec = Exec::serial;
        else if (e == "parallel") c.exec = Exec::parallel;
        else throw std::invalid_argument("exec must be serial or parallel");
    }
    c.threads = j.contains("threads") ? j.at("threads").get<int>() : default_threads;
    return c;
}

SecondLevelMode parse_mode(const std::string& s) {
    if (s == "one-sample-uniform") return SecondLevelMode::one_sample_uniform;
    if (s == "one-sample-exact") return SecondLevelMode::one_sample_exact;
    if (s == "two-sample") return SecondLevelMode::two_sample;
    throw std::invalid_argument("unknown second-level mode: " + s);
}

std::string fmt17(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

json params_json(const Level1Params& p) {
    return json{{"enforce_min_n", p.enforce_min_n},
                {"block_frequency_M", p.block_frequency_M},
                {"nonoverlap_m", p.nonoverlap_m},
                {"nonoverlap_N", p.nonoverlap_N},
                {"overlap_m", p.overlap_m},
                {"overlap_M", p.overlap_M},
                {"universal_L", p.universal_L},
                {"universal_Q", p.universal_Q},
                {"serial_m", p.serial_m},
                {"apen_m", p.apen_m},
                {"lc_M", p.lc_M}};
}

// Full effective configuration with every default materialized, so a run is
// reproducible from its report alone.
json config_json(const CampaignConfig& c) {
    return json{{"test", test_name(c.test)},
                {"variant", c.variant},
                {"params", params_json(c.params)},
                {"generator", to_string(c.generator)},
                {"master_seed", c.master_seed},
                {"first_orbit_index", c.first_orbit_index},
                {"n", c.n},
                {"m", c.m},
                {"m_prime", c.m_prime},
                {"repetitions", c.repetitions},
                {"alphas", c.alphas},
                {"exec", c.exec == Exec::serial ? "serial" : "parallel"},
                {"threads", c.threads}};
}

json aggregate_json(const Aggregate& a) {
    return json{{"mean", a.mean}, {"sd", a.sd}, {"sem", a.sem}};
}

json delta_point_json(const DeltaResult& r) {
    json p;
    p["m"] = r.m;
    p["trials"] = r.trials;
    p["df"] = aggregate_json(r.df);
    p["dg"] = aggregate_json(r.dg);
    p["delta"] = r.delta;
    p["delta_sem"] = r.delta_sem;
    p["d"] = r.d;
    p["bound"] = r.bound;
    p["violations"] = r.violations;
    return p;
}

void write_plot(const std::filesystem::path& path,
                const std::vector<std::pair<double, double>>& rows) {
    std::ostringstream out;
    for (const auto& [x, y] : rows) out << fmt17(x) << ' ' << fmt17(y) << '\n';
    io::atomic_write(path, out.str());
}

json run_reference_entry(const json& spec, const std::filesystem::path& out_dir,
                         int default_threads, const std::string& name) {
    CampaignConfig config = parse_config(spec, default_threads);
    std::filesystem::path file = out_dir / (name + ".pvals");
    PValueSample ref = build_reference(config, file);
    json entry;
    entry["effective_config"] = config_json(config);
    entry["file"] = file.string();
    entry["test"] = test_name(config.test);
    entry["variant"] = config.variant;
    entry["n"] = config.n;
    entry["m_prime"] = config.m_prime;
    entry["count"] = ref.size();
    return entry;
}

json run_second_level_entry(const json& spec, const std::filesystem::path& out_dir,
                            int default_threads, const std::string& name) {
    CampaignConfig config = parse_config(spec, default_threads);
    SecondLevelMode mode = parse_mode(spec.value("mode", "one-sample-uniform"));

    PValueSample reference;
    const PValueSample* ref_ptr = nullptr;
    if (mode == SecondLevelMode::two_sample) {
        if (!spec.contains("reference"))
            throw std::invalid_argument("two-sample campaign needs a reference p-value file");
        reference = PValueSample(io::read_pvalues(spec.at("reference").get<std::string>()));
        ref_ptr = &reference;
    }

    ExperimentResult result = run_second_level(config, mode, ref_ptr);

    json entry;
    entry["effective_config"] = config_json(config);
    entry["mode"] = spec.value("mode", "one-sample-uniform");
    entry["test"] = test_name(config.test);
    entry["variant"] = config.variant;
    entry["generator"] = to_string(config.generator);
    entry["n"] = config.n;
    entry["m"] = config.m;
    entry["repetitions"] = config.repetitions;
    entry["statistic"] = aggregate_json(result.statistic);
    entry["p_value"] = aggregate_json(result.p_value);
    entry["alphas"] = result.alphas;
    entry["pass_counts"] = result.pass_counts;
    json reps = json::array();
    for (const auto& r : result.reps)
        reps.push_back(json{{"statistic", r.statistic}, {"p_value", r.p_value}});
    entry["reps"] = reps;

    std::vector<std::pair<double, double>> rows;
    for (size_t i = 0; i < result.reps.size(); i++)
        rows.emplace_back(double(i + 1), result.reps[i].statistic);
    write_plot(out_dir / (name + ".dat"), rows);
    return entry;
}

json run_delta_entry(const json& spec, const std::filesystem::path& out_dir, int default_threads,
                     const std::string& name) {
    const std::string source = spec.value("source", "ge");
    const uint64_t trials = spec.value("trials", uint64_t(1000));
    const uint64_t master = spec.value("master_seed", uint64_t(1));
    const int threads = spec.contains("threads") ? spec.at("threads").get<int>() : default_threads;
    Exec exec = Exec::parallel;
    if (spec.value("exec", "parallel") == std::string("serial")) exec = Exec::serial;

    std::vector<uint64_t> ms;
    if (spec.contains("m_list")) ms = spec.at("m_list").get<std::vector<uint64_t>>();
    else ms.push_back(spec.value("m", uint64_t(1000)));

    GeParams ge{};
    StepDistribution exact;
    json entry;
    entry["source"] = source;
    entry["trials"] = trials;
    entry["master_seed"] = master;
    entry["exec"] = exec == Exec::serial ? "serial" : "parallel";
    entry["threads"] = threads;
    entry["m_list"] = ms;
    if (source == "ge") {
        ge.e = spec.at("e").get<double>();
        entry["e"] = ge.e;
    } else if (source == "exact") {
        auto id = test_from_name(spec.at("test").get<std::string>());
        const uint64_t n = spec.at("n").get<uint64_t>();
        if (id == TestId::frequency) exact = exact_distribution_frequency(n);
        else if (id == TestId::rank) exact = exact_distribution_rank(n);
        else throw std::invalid_argument("delta source=exact supports frequency and rank");
        entry["test"] = spec.at("test").get<std::string>();
        entry["n"] = n;
    } else {
        throw std::invalid_argument("delta source must be ge or exact");
    }

    SeedPolicy seeds{master};
    json points = json::array();
    std::vector<std::pair<double, double>> delta_rows, bound_rows;
    for (uint64_t m : ms) {
        DeltaResult r = source == "ge"
                            ? monte_carlo_delta(ge, m, trials, seeds, exec, threads)
                            : monte_carlo_delta(exact, m, trials, seeds, exec, threads);
        points.push_back(delta_point_json(r));
        delta_rows.emplace_back(double(m), r.delta);
        bound_rows.emplace_back(double(m), r.bound);
    }
    entry["points"] = points;
    write_plot(out_dir / (name + ".dat"), delta_rows);
    write_plot(out_dir / (name + "-bound.dat"), bound_rows);
    return entry;
}

}  // namespace

void run_manifest(const std::filesystem::path& manifest_path,
                  const std::filesystem::path& out_dir, int threads) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open manifest " + manifest_path.string());
    json manifest = json::parse(in);
    if (!manifest.contains("campaigns") || !manifest.at("campaigns").is_array())
        throw std::invalid_argument("manifest needs a campaigns array");

    std::filesystem::create_directories(out_dir);

    json report;
    report["version"] = version;
    report["config"] = manifest;
    json campaigns = json::array();

    size_t unnamed = 0;
    for (const json& spec : manifest.at("campaigns")) {
        std::string name = spec.contains("name") ? spec.at("name").get<std::string>()
                                                 : "campaign-" + std::to_string(unnamed++);
        std::string kind = spec.value("kind", "second-level");
        json entry;
        if (kind == "reference") entry = run_reference_entry(spec, out_dir, threads, name);
        else if (kind == "second-level") entry = run_second_level_entry(spec, out_dir, threads, name);
        else if (kind == "delta") entry = run_delta_entry(spec, out_dir, threads, name);
        else throw std::invalid_argument("unknown campaign kind: " + kind);
        entry["name"] = name;
        entry["kind"] = kind;
        campaigns.push_back(entry);
    }
    report["campaigns"] = campaigns;
    io::atomic_write(out_dir / "report.json", report.dump(2) + "\n");
}

}  // namespace ks2
