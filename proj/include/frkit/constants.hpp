#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "frkit/fft.hpp"
#include "frkit/rng.hpp"
#include "frkit/signal.hpp"

namespace frkit {

// Monte-Carlo probes of the Talagrand constant C_T and the Bourgain constant
// C(q): for h = 1_M with M a random "generic" subset, the realized ratios
//
//     talagrand = ||h_hat||_{L2(mu)} / ||h_hat||_{L1(mu)}   (>= 1)
//     bourgain  = ||h_hat||_{Lq(mu)} / ||h_hat||_{L2(mu)}   (>= 1)
//
// are collected over many draws and summarized by a percentile. Holder gives
// talagrand <= bourgain^{q/(q-2)} deterministically for every draw.

// Uniform random subset of size ceil(N^{2/q}), the size used by the Bourgain
// inequality; Floyd's algorithm keeps the draw O(|M|).
inline IndexSet generic_set(std::size_t n, double q_exponent, std::uint64_t seed) {
    if (!(q_exponent > 2.0)) throw std::invalid_argument("generic_set: q must be > 2");
    if (n == 0) throw std::invalid_argument("generic_set: N must be >= 1");
    const auto size = static_cast<std::size_t>(
        std::min(static_cast<double>(n),
                 std::ceil(std::pow(static_cast<double>(n), 2.0 / q_exponent))));
    Rng rng(seed);
    std::unordered_set<std::uint32_t> seen;
    seen.reserve(2 * size);
    std::vector<std::uint32_t> chosen;
    chosen.reserve(size);
    for (std::size_t j = n - size; j < n; ++j) {
        const auto t = static_cast<std::uint32_t>(rng.uniform_index(j + 1));
        const std::uint32_t pick = seen.count(t) ? static_cast<std::uint32_t>(j) : t;
        seen.insert(pick);
        chosen.push_back(pick);
    }
    return IndexSet(std::move(chosen), n);
}

// Bernoulli-p variant of the generic-set definition; provided alongside the
// fixed-size sampler, which is the estimator default.
inline IndexSet bernoulli_generic_set(std::size_t n, double p, std::uint64_t seed) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli_generic_set: p in (0, 1]");
    Rng rng(seed);
    std::vector<std::uint32_t> kept;
    for (std::size_t x = 0; x < n; ++x)
        if (rng.uniform() < p) kept.push_back(static_cast<std::uint32_t>(x));
    return IndexSet(std::move(kept), n);
}

struct SpectralRatios {
    double talagrand;
    double bourgain;
    double bourgain_exp;  // bourgain^{q/(q-2)}
};

inline SpectralRatios spectral_ratios(const IndexSet& m, double q, const Fft& plan) {
    if (m.is_empty()) throw std::invalid_argument("spectral_ratios: M must be nonempty");
    if (!(q > 2.0)) throw std::invalid_argument("spectral_ratios: q must be > 2");
    const std::size_t n = m.domain_size();
    std::vector<cplx> h(n, cplx{0.0, 0.0});
    for (auto x : m.members()) h[x] = 1.0;
    plan.forward(h);

    double s1 = 0.0, s2 = 0.0, sq = 0.0;
    for (const auto& z : h) {
        const double a = std::abs(z);
        s1 += a;
        s2 += a * a;
        sq += std::pow(a, q);
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    const double l1 = s1 * inv_n;
    const double l2 = std::sqrt(s2 * inv_n);
    const double lq = std::pow(sq * inv_n, 1.0 / q);

    SpectralRatios out;
    out.talagrand = l2 / l1;
    out.bourgain = lq / l2;
    out.bourgain_exp = std::pow(out.bourgain, q / (q - 2.0));
    if (out.talagrand > out.bourgain_exp + 1e-9)
        throw std::logic_error("spectral_ratios: Holder chain violated");
    return out;
}

inline double talagrand_ratio(const IndexSet& m) {
    // q enters only the Bourgain side; any admissible value works here.
    return spectral_ratios(m, 4.0, Fft(m.domain_size())).talagrand;
}

inline std::pair<double, double> bourgain_ratio(const IndexSet& m, double q) {
    const auto r = spectral_ratios(m, q, Fft(m.domain_size()));
    return {r.bourgain, r.bourgain_exp};
}

// Percentile with linear interpolation between order statistics.
inline double percentile_interpolated(std::vector<double> values, double percentile) {
    if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
    if (!(percentile > 0.0 && percentile < 100.0))
        throw std::invalid_argument("percentile must lie in (0, 100)");
    std::sort(values.begin(), values.end());
    const double rank = percentile / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    if (lo + 1 >= values.size()) return values.back();
    const double frac = rank - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

struct ConstantEstimate {
    std::vector<std::size_t> n_grid;
    std::vector<double> q_grid;
    std::size_t trials = 0;
    double percentile = 90.0;
    std::uint64_t seed = 0;
    // matrices indexed [n][q]
    std::vector<std::vector<double>> ct_estimates;
    std::vector<std::vector<double>> cq_exp_estimates;
    std::size_t holder_violations = 0;  // per-draw Holder failures; must stay 0
};

inline ConstantEstimate estimate_constants(const std::vector<std::size_t>& n_grid,
                                           const std::vector<double>& q_grid, std::size_t trials,
                                           double percentile, std::uint64_t seed) {
    if (n_grid.empty() || q_grid.empty())
        throw std::invalid_argument("estimate_constants: empty grid");
    if (trials < 100) throw std::invalid_argument("estimate_constants: need trials >= 100");

    ConstantEstimate est;
    est.n_grid = n_grid;
    est.q_grid = q_grid;
    est.trials = trials;
    est.percentile = percentile;
    est.seed = seed;
    est.ct_estimates.assign(n_grid.size(), std::vector<double>(q_grid.size(), 0.0));
    est.cq_exp_estimates.assign(n_grid.size(), std::vector<double>(q_grid.size(), 0.0));

    for (std::size_t in = 0; in < n_grid.size(); ++in) {
        const Fft plan(n_grid[in]);
        for (std::size_t iq = 0; iq < q_grid.size(); ++iq) {
            std::vector<double> ct, cq;
            ct.reserve(trials);
            cq.reserve(trials);
            for (std::size_t t = 0; t < trials; ++t) {
                const auto m = generic_set(n_grid[in], q_grid[iq], mix_seed(seed, in, iq, t));
                const auto r = spectral_ratios(m, q_grid[iq], plan);
                ct.push_back(r.talagrand);
                cq.push_back(r.bourgain_exp);
                if (r.talagrand > r.bourgain_exp + 1e-9) ++est.holder_violations;
            }
            est.ct_estimates[in][iq] = percentile_interpolated(std::move(ct), percentile);
            est.cq_exp_estimates[in][iq] = percentile_interpolated(std::move(cq), percentile);
        }
    }
    return est;
}

enum class ConcentrationRegime { Log, PowerLaw };

struct ConcentrationBound {
    double value = 0.0;
    bool regime_ok = false;  // r satisfies the regime's restriction
};

// Closed-form lower bound on FR(f) for signals L2-concentrated at level r on
// a generic set, with C_T supplied by the caller. The Log regime carries the
// sqrt(log N loglog N) factor; PowerLaw applies when |M| = O(N^{1-eps}) and
// drops it.
inline ConcentrationBound concentration_fr_bound(double r, std::size_t n,
                                                 ConcentrationRegime regime, double c_t = 1.0) {
    if (!(r > 0.0 && r < 1.0))
        throw std::invalid_argument("concentration_fr_bound: r must lie in (0, 1)");
    if (!(c_t > 0.0)) throw std::invalid_argument("concentration_fr_bound: C_T must be positive");
    ConcentrationBound out;
    double factor = 1.0;
    if (regime == ConcentrationRegime::Log) {
        if (n < 3) return out;  // loglog N undefined below e
        const double ln_n = std::log(static_cast<double>(n));
        factor = std::sqrt(ln_n * std::log(ln_n));
    }
    const double l = c_t * factor / (1.0 - r);
    out.regime_ok = r < 1.0 / l;
    if (!out.regime_ok) return out;
    out.value = std::sqrt(static_cast<double>(n)) * (1.0 - r * l) / l;
    return out;
}

}  // namespace frkit
