#include "doctest.h"

#include <cmath>
#include <random>

#include "ks2/level1.hpp"
#include "ks2/mt19937_64.hpp"
#include "ks2/theory.hpp"
#include "oracles.hpp"

using doctest::Approx;

TEST_CASE("frequency distribution hand enumeration at tiny n") {
    ks2::StepDistribution n1 = ks2::exact_distribution_frequency(1);
    REQUIRE(n1.size() == 1);
    CHECK(n1.atoms()[0].value == Approx(0.31731050786291410).epsilon(1e-14));
    CHECK(n1.atoms()[0].mass == Approx(1.0).epsilon(1e-14));

    ks2::StepDistribution n2 = ks2::exact_distribution_frequency(2);
    REQUIRE(n2.size() == 2);
    CHECK(n2.atoms()[0].value == Approx(0.15729920705028513).epsilon(1e-14));
    CHECK(n2.atoms()[0].mass == Approx(0.5).epsilon(1e-14));
    CHECK(n2.atoms()[1].value == 1.0);
    CHECK(n2.atoms()[1].mass == Approx(0.5).epsilon(1e-14));
    CHECK(n2.cumulative().back() == 1.0);
}

TEST_CASE("frequency distribution matches exhaustive enumeration up to n = 20") {
    for (int n : {1, 2, 3, 5, 8, 13, 17, 20}) {
        auto brute = oracles::brute_force_frequency_atoms(n);
        ks2::StepDistribution mine = ks2::exact_distribution_frequency(n);
        REQUIRE(mine.size() == brute.size());
        for (size_t i = 0; i < brute.size(); i++) {
            CHECK(mine.atoms()[i].value == Approx(brute[i].first).epsilon(1e-13));
            CHECK(mine.atoms()[i].mass == Approx(brute[i].second).epsilon(1e-13));
        }
        double d_mine = ks2::compute_d(mine).d;
        double d_brute = oracles::brute_force_d(brute);
        CHECK(d_mine == Approx(d_brute).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("step distribution masses always sum to one") {
    for (uint64_t n : {uint64_t(100), uint64_t(10000), uint64_t(1000000)}) {
        ks2::StepDistribution g = ks2::exact_distribution_frequency(n);
        CHECK(g.cumulative().back() == 1.0);
        double total = 0.0;
        for (const auto& a : g.atoms()) total += a.mass;
        CHECK(total == Approx(1.0).epsilon(1e-12));
    }
    ks2::StepDistribution r = ks2::exact_distribution_rank(1024 * 976);
    double total = 0.0;
    for (const auto& a : r.atoms()) total += a.mass;
    CHECK(total == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rank class probabilities from the product formula") {
    auto probs2 = ks2::gf2_rank_class_probs(2);
    CHECK(probs2[0] == Approx(6.0 / 16.0).epsilon(1e-14));
    CHECK(probs2[1] == Approx(9.0 / 16.0).epsilon(1e-14));
    CHECK(probs2[2] == Approx(1.0 / 16.0).epsilon(1e-14));

    auto probs32 = ks2::gf2_rank_class_probs(32);
    CHECK(probs32[0] == Approx(0.28878809515384114).epsilon(1e-14));
    CHECK(probs32[1] == Approx(0.57757619017320484).epsilon(1e-14));
    CHECK(probs32[2] == Approx(0.13363571467295402).epsilon(1e-14));
    CHECK(probs32[0] + probs32[1] + probs32[2] == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rank distribution with a single matrix") {
    ks2::StepDistribution g = ks2::exact_distribution_rank(1024);
    REQUIRE(g.size() == 3);
    CHECK(g.atoms()[0].value == Approx(0.039104615786935914).epsilon(1e-13));
    CHECK(g.atoms()[0].mass == Approx(0.13363571467295402).epsilon(1e-13));
    CHECK(g.atoms()[1].value == Approx(0.29189144506110045).epsilon(1e-13));
    CHECK(g.atoms()[1].mass == Approx(0.28878809515384114).epsilon(1e-13));
    CHECK(g.atoms()[2].value == Approx(0.69372014098888262).epsilon(1e-13));
    CHECK(g.atoms()[2].mass == Approx(0.57757619017320484).epsilon(1e-13));
    CHECK_THROWS_AS(ks2::exact_distribution_rank(1023), std::invalid_argument);
}

TEST_CASE("rank distribution at two matrices matches simulated ranks") {
    ks2::StepDistribution g = ks2::exact_distribution_rank(2048);
    REQUIRE(g.size() == 6);

    const int draws = 1000000;
    ks2::Mt19937_64 rng(7);
    std::vector<uint64_t> counts(g.size(), 0);
    for (int t = 0; t < draws; t++) {
        int k[3] = {0, 0, 0};
        for (int mat = 0; mat < 2; mat++) {
            std::array<uint32_t, 32> rows;
            for (int r = 0; r < 32; r += 2) {
                uint64_t w = rng.next();
                rows[r] = uint32_t(w);
                rows[r + 1] = uint32_t(w >> 32);
            }
            int rank = ks2::level1_detail::gf2_rank32(rows);
            k[rank == 32 ? 0 : rank == 31 ? 1 : 2]++;
        }
        double pi[3] = {0.28878809515384114, 0.57757619017320484, 0.13363571467295402};
        double chi2 = 0.0;
        for (int c = 0; c < 3; c++) {
            double expect = 2.0 * pi[c];
            chi2 += (k[c] - expect) * (k[c] - expect) / expect;
        }
        double p = std::exp(-chi2 / 2.0);
        // find the matching atom
        size_t best = 0;
        double best_gap = 2.0;
        for (size_t i = 0; i < g.size(); i++) {
            double gap = std::fabs(g.atoms()[i].value - p);
            if (gap < best_gap) { best_gap = gap; best = i; }
        }
        REQUIRE(best_gap < 1e-9);
        counts[best]++;
    }
    for (size_t i = 0; i < g.size(); i++) {
        double expect = draws * g.atoms()[i].mass;
        double sigma = std::sqrt(draws * g.atoms()[i].mass * (1.0 - g.atoms()[i].mass));
        CHECK(std::fabs(double(counts[i]) - expect) <= 3.0 * sigma);
    }
}

TEST_CASE("deviation constant for the toy distribution is |e| exactly") {
    for (double e : {-0.5, -0.1, 0.0, 0.1, 0.5}) {
        auto bound = ks2::compute_d(ks2::GeParams{e});
        CHECK(bound.d == std::fabs(e));
        if (e != 0.0) CHECK(bound.attained_at == 0.5);
    }
}

TEST_CASE("deviation constant of a discretized uniform goes as 1/m") {
    for (int m : {4, 10, 100}) {
        std::vector<ks2::StepAtom> atoms;
        for (int k = 1; k <= m; k++)
            atoms.push_back({double(k) / m, 1.0 / m});
        ks2::StepDistribution g = ks2::StepDistribution::from_atoms(atoms);
        CHECK(ks2::compute_d(g).d == Approx(1.0 / m).epsilon(1e-12));
    }
}

TEST_CASE("delta bound arithmetic") {
    CHECK(ks2::delta_bound(1000000, 7.98e-4) == Approx(0.798).epsilon(1e-12));
    CHECK(ks2::delta_bound(1000, 0.0) == 0.0);
    CHECK(ks2::delta_bound(4, 0.5) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("safe sample size formula and sandwich property") {
    REQUIRE(ks2::safe_sample_size(0.1, 0.01).has_value());
    CHECK(*ks2::safe_sample_size(0.1, 0.01) == 100);
    CHECK(!ks2::safe_sample_size(0.1, 0.0).has_value());

    // halving d quadruples the bound
    CHECK(*ks2::safe_sample_size(0.32, 0.004) == 4 * *ks2::safe_sample_size(0.32, 0.008));

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int i = 0; i < 200; i++) {
        double delta = u(rng), d = u(rng) * 0.1;
        auto m = ks2::safe_sample_size(delta, d);
        REQUIRE(m.has_value());
        // m = 0 means even a single sample exceeds the bias budget
        if (*m >= 1) CHECK(ks2::delta_bound(*m, d) <= delta * (1.0 + 1e-12));
        CHECK(ks2::delta_bound(*m + 1, d) > delta * (1.0 - 1e-12));
    }
}

TEST_CASE("mu constant closed form") {
    CHECK(ks2::mu_constant() == Approx(0.86873116063615914).epsilon(1e-15));
    CHECK(ks2::mu_constant() ==
          Approx(std::sqrt(std::acos(-1.0) / 2.0) * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("toy cdf and inverse") {
    ks2::GeParams g{0.1};
    CHECK(ks2::ge_cdf(g, 0.0) == 0.0);
    CHECK(ks2::ge_cdf(g, 0.5) == Approx(0.6).epsilon(1e-15));
    CHECK(ks2::ge_cdf(g, 1.0) == Approx(1.0).epsilon(1e-15));
    // continuity at the knot
    CHECK(ks2::ge_cdf(g, 0.5 + 1e-12) == Approx(0.6).epsilon(1e-9));
    CHECK(ks2::ge_sample(g, 0.55) == Approx(0.55 / 1.2).epsilon(1e-14));

    ks2::GeParams zero{0.0};
    for (double x : {0.0, 0.3, 0.77, 1.0}) CHECK(ks2::ge_cdf(zero, x) == x);
    for (double u : {0.0, 0.25, 0.9}) CHECK(ks2::ge_sample(zero, u) == u);

    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (double e : {-0.4, -0.1, 0.2, 0.45}) {
        ks2::GeParams p{e};
        for (int i = 0; i < 500; i++) {
            double u = unif(rng);
            CHECK(ks2::ge_cdf(p, ks2::ge_sample(p, u)) == Approx(u).epsilon(1e-12));
        }
    }
}

TEST_CASE("step distribution sampling reproduces atom masses") {
    ks2::StepDistribution g = ks2::exact_distribution_frequency(100);
    const int draws = 1000000;
    ks2::Mt19937_64 rng(23);
    std::vector<uint64_t> counts(g.size(), 0);
    for (int t = 0; t < draws; t++) {
        double p = g.sample(rng.next_double());
        auto it = std::lower_bound(
            g.atoms().begin(), g.atoms().end(), p,
            [](const ks2::StepAtom& a, double v) { return a.value < v; });
        REQUIRE(it != g.atoms().end());
        REQUIRE(it->value == p);
        counts[size_t(it - g.atoms().begin())]++;
    }
    for (size_t i = 0; i < g.size(); i++) {
        double mass = g.atoms()[i].mass;
        if (mass < 1e-6) continue;
        double sigma = std::sqrt(draws * mass * (1.0 - mass));
        CHECK(std::fabs(double(counts[i]) - draws * mass) <= 4.0 * sigma);
    }
}

TEST_CASE("table-scale deviation constants") {
    // desk-scale spot values; the full-scale figures are acceptance criteria
    ks2::StepDistribution freq = ks2::exact_distribution_frequency(10000);
    double d_freq = ks2::compute_d(freq).d;
    CHECK(d_freq > 0.0);
    CHECK(d_freq < 0.02);

    ks2::StepDistribution rank = ks2::exact_distribution_rank(10240);
    double d_rank = ks2::compute_d(rank).d;
    CHECK(d_rank > 0.0);
    CHECK(d_rank < 0.2);
}

TEST_CASE("step distribution construction rules") {
    using ks2::StepAtom;
    // unsorted input with an exact duplicate merges
    auto g = ks2::StepDistribution::from_atoms(
        {StepAtom{0.7, 0.25}, StepAtom{0.2, 0.5}, StepAtom{0.7, 0.25}});
    REQUIRE(g.size() == 2);
    CHECK(g.atoms()[0].value == 0.2);
    CHECK(g.atoms()[0].mass == Approx(0.5).epsilon(1e-15));
    CHECK(g.atoms()[1].mass == Approx(0.5).epsilon(1e-15));
    CHECK(g.cdf(0.2) == Approx(0.5).epsilon(1e-15));
    CHECK(g.cdf_left(0.2) == 0.0);
    CHECK(g.cdf(0.19) == 0.0);
    CHECK(g.cdf(1.0) == 1.0);

    // tiny masses fold into the nearest retained atom
    auto folded = ks2::StepDistribution::from_atoms(
        {StepAtom{0.1, 0.6}, StepAtom{0.100000001, 1e-20}, StepAtom{0.9, 0.4}});
    REQUIRE(folded.size() == 2);
    CHECK(folded.atoms()[0].mass == Approx(0.6 + 1e-20).epsilon(1e-15));

    CHECK_THROWS_AS(ks2::StepDistribution::from_atoms({}), std::invalid_argument);
    CHECK_THROWS_AS(ks2::StepDistribution::from_atoms({StepAtom{-0.1, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ks2::StepDistribution::from_atoms({StepAtom{0.5, -1.0}}),
                    std::invalid_argument);
}
