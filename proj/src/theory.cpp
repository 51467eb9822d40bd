#include "ks2/theory.hpp"

#include "ks2/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ks2 {

StepDistribution exact_distribution_frequency(uint64_t n) {
    if (n == 0) throw std::invalid_argument("exact_distribution_frequency: n must be >= 1");
    const double nd = double(n);
    const double lg_n = std::lgamma(nd + 1.0);
    std::vector<StepAtom> atoms;
    atoms.reserve(n / 2 + 1);
    // k ascending means |S| = n - 2k descending, so the p-value ascends;
    // merge +/-S by visiting k <= n/2 only. The two rounding steps mirror
    // the first-level frequency test exactly so atoms land on its outputs.
    for (uint64_t k = 0; 2 * k <= n; k++) {
        double kd = double(k);
        double lmass = lg_n - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) - nd * std::log(2.0);
        double s = 2.0 * (nd - kd) - nd;
        if (s != 0.0) lmass += std::log(2.0);  // S and -S
        double s_obs = std::fabs(s) / std::sqrt(nd);
        double p = erfc(s_obs / std::sqrt(2.0));
        atoms.push_back({p, std::exp(lmass)});
    }
    return StepDistribution::from_atoms(std::move(atoms));
}

std::array<double, 3> gf2_rank_class_probs(int m) {
    if (m < 2) throw std::invalid_argument("gf2_rank_class_probs: m must be >= 2");
    auto rank_prob = [m](int r) {
        double lp = (double(r) * (2.0 * m - r) - double(m) * m) * std::log(2.0);
        double corr = 0.0;
        for (int i = 0; i < r; i++) {
            double num = 1.0 - std::pow(2.0, double(i - m));
            double den = 1.0 - std::pow(2.0, double(i - r));
            corr += 2.0 * std::log(num) - std::log(den);
        }
        return std::exp(lp + corr);
    };
    double full = rank_prob(m), sub = rank_prob(m - 1);
    return {full, sub, 1.0 - full - sub};
}

StepDistribution exact_distribution_rank(uint64_t n) {
    const uint64_t N = n / 1024;
    if (N == 0) throw std::invalid_argument("exact_distribution_rank: need n >= 1024");
    auto pi = gf2_rank_class_probs(32);
    const double Nd = double(N);
    const double lg_N = std::lgamma(Nd + 1.0);
    const double lpi0 = std::log(pi[0]), lpi1 = std::log(pi[1]), lpi2 = std::log(pi[2]);
    std::vector<StepAtom> atoms;
    atoms.reserve((N + 1) * (N + 2) / 2);
    for (uint64_t k0 = 0; k0 <= N; k0++) {
        for (uint64_t k1 = 0; k0 + k1 <= N; k1++) {
            uint64_t k2 = N - k0 - k1;
            double chi2 = (k0 - Nd * pi[0]) * (k0 - Nd * pi[0]) / (Nd * pi[0]) +
                          (k1 - Nd * pi[1]) * (k1 - Nd * pi[1]) / (Nd * pi[1]) +
                          (k2 - Nd * pi[2]) * (k2 - Nd * pi[2]) / (Nd * pi[2]);
            double lmass = lg_N - std::lgamma(double(k0) + 1.0) - std::lgamma(double(k1) + 1.0) -
                           std::lgamma(double(k2) + 1.0) + double(k0) * lpi0 + double(k1) * lpi1 +
                           double(k2) * lpi2;
            atoms.push_back({std::exp(-chi2 / 2.0), std::exp(lmass)});
        }
    }
    return StepDistribution::from_atoms(std::move(atoms));
}

DeviationBound compute_d(const StepDistribution& G) {
    // |step - identity| on [0,1] peaks at an atom, from one side or the other.
    const auto& atoms = G.atoms();
    const auto& cum = G.cumulative();
    DeviationBound best{0.0, 0.0, "uniform"};
    for (size_t i = 0; i < atoms.size(); i++) {
        double x = atoms[i].value;
        double right = std::fabs(cum[i] - x);
        double left = std::fabs((i == 0 ? 0.0 : cum[i - 1]) - x);
        double g = std::max(right, left);
        if (g > best.d) { best.d = g; best.attained_at = x; }
    }
    return best;
}

DeviationBound compute_d(const GeParams& G) {
    if (!(std::fabs(G.e) < 1.0)) throw std::invalid_argument("GeParams: |e| must be < 1");
    return {std::fabs(G.e), 0.5, "uniform"};
}

double delta_bound(uint64_t m, double d) {
    if (m == 0) throw std::invalid_argument("delta_bound: m must be >= 1");
    if (d < 0.0) throw std::invalid_argument("delta_bound: d must be >= 0");
    return std::sqrt(double(m)) * d;
}

std::optional<uint64_t> safe_sample_size(double delta, double d) {
    if (!(delta > 0.0)) throw std::invalid_argument("safe_sample_size: delta must be > 0");
    if (d < 0.0) throw std::invalid_argument("safe_sample_size: d must be >= 0");
    if (d == 0.0) return std::nullopt;
    double q = delta / d;
    return uint64_t(std::floor(q * q));
}

double mu_constant() {
    return std::sqrt(std::numbers::pi / 2.0) * std::log(2.0);
}

double ge_cdf(const GeParams& g, double x) {
    if (!(std::fabs(g.e) < 1.0)) throw std::invalid_argument("GeParams: |e| must be < 1");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (x <= 0.5) return (1.0 + 2.0 * g.e) * x;
    return (1.0 - 2.0 * g.e) * x + 2.0 * g.e;
}

double ge_sample(const GeParams& g, double u) {
    if (!(std::fabs(g.e) < 1.0)) throw std::invalid_argument("GeParams: |e| must be < 1");
    if (u <= (1.0 + 2.0 * g.e) / 2.0) return u / (1.0 + 2.0 * g.e);
    return (u - 2.0 * g.e) / (1.0 - 2.0 * g.e);
}

}
