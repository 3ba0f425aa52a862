#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "frkit/fourier_ratio.hpp"
#include "frkit/rng.hpp"
#include "frkit/signal.hpp"

namespace frkit {

// Circular complex Gaussian convention: total variance sigma^2 per entry,
// sigma^2/2 per real component. Under the unitary transform the spectrum of
// such noise is identically distributed.

inline cplx complex_gaussian(Rng& rng, double sigma) {
    const double s = sigma * 0.7071067811865475244;  // sigma / sqrt(2)
    return {s * rng.gaussian(), s * rng.gaussian()};
}

inline Signal random_gaussian_signal(std::size_t n, Rng& rng, double sigma = 1.0) {
    std::vector<cplx> v(n);
    for (auto& z : v) z = complex_gaussian(rng, sigma);
    return Signal(std::move(v));
}

inline Signal add_complex_gaussian(const Signal& f, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("add_complex_gaussian: sigma must be >= 0");
    Rng rng(seed);
    Signal out = f;
    if (sigma == 0.0) return out;
    for (std::size_t x = 0; x < out.size(); ++x) out[x] += complex_gaussian(rng, sigma);
    return out;
}

struct PerturbationReport {
    double fr_f = 0.0;
    double fr_n = 0.0;  // 0 when the perturbation is identically zero
    double fr_sum = 0.0;
    double deterministic_bound = 0.0;  // (||n_hat||_1 + FR(f) ||n_hat||_2) / (||f_hat||_2 - ||n_hat||_2)
    double observed_deviation = 0.0;
    bool bound_applicable = false;  // requires ||n_hat||_2 < ||f_hat||_2
};

// Evaluates both sides of the deterministic perturbation inequality; the
// inequality is exact (no constants, no probability), so whenever t < s the
// observed deviation may not exceed the bound.
inline PerturbationReport perturbation_bound(const Signal& f, const Signal& noise) {
    detail::require_nonzero(f.is_zero(), "perturbation_bound: zero signal");
    if (noise.size() != f.size()) throw std::invalid_argument("perturbation_bound: length mismatch");
    const Spectrum F = dft(f);
    const Spectrum Nh = dft(noise);
    const double a = lp_norm(F, 1.0), s = lp_norm(F, 2.0);
    const double b = lp_norm(Nh, 1.0), t = lp_norm(Nh, 2.0);

    PerturbationReport rep;
    rep.fr_f = a / s;
    rep.fr_n = t > 0.0 ? b / t : 0.0;
    rep.bound_applicable = t < s;
    if (rep.bound_applicable) rep.deterministic_bound = (b + rep.fr_f * t) / (s - t);

    Signal sum = f;
    for (std::size_t x = 0; x < sum.size(); ++x) sum[x] += noise[x];
    rep.fr_sum = sum.is_zero() ? 0.0 : fourier_ratio(sum);
    rep.observed_deviation = std::abs(rep.fr_sum - rep.fr_f);
    return rep;
}

inline Signal average_signals(const std::vector<Signal>& copies) {
    if (copies.empty()) throw std::invalid_argument("average_signals: need at least one copy");
    const std::size_t n = copies.front().size();
    for (const auto& c : copies)
        if (c.size() != n) throw std::invalid_argument("average_signals: mismatched lengths");
    Signal out = Signal::zeros(n);
    for (const auto& c : copies)
        for (std::size_t x = 0; x < n; ++x) out[x] += c[x];
    const double inv = 1.0 / static_cast<double>(copies.size());
    for (std::size_t x = 0; x < n; ++x) out[x] *= inv;
    return out;
}

inline double gaussian_radius(std::size_t n, double gamma) {
    // r_gamma = sqrt(N) + sqrt(log(1/gamma)), natural log
    return std::sqrt(static_cast<double>(n)) + std::sqrt(std::log(1.0 / gamma));
}

namespace detail {

inline double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace detail

// Shared shape for the Monte-Carlo coverage experiments: the per-trial bound
// uses that trial's realized noise, and the failure frequency is compared
// against gamma plus three binomial standard errors.
struct CoverageReport {
    bool regime_ok = false;
    double radius = 0.0;  // t_gamma or sigma r_gamma / sqrt(n), per experiment
    std::size_t trials = 0;
    std::size_t violations = 0;
    double violation_rate = 0.0;
    double slack = 0.0;  // 3 sqrt(gamma (1-gamma) / trials)
    bool pass = false;
    double median_deviation = 0.0;
    double radius_coverage = 0.0;  // fraction of trials with noise norm inside the radius
};

inline CoverageReport gaussian_deviation_experiment(const Signal& f, double sigma, double gamma,
                                                    std::size_t trials, std::uint64_t seed) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("gaussian_deviation_experiment: gamma must be in (0, 1)");
    if (!(sigma >= 0.0)) throw std::invalid_argument("gaussian_deviation_experiment: sigma >= 0");
    const std::size_t n = f.size();
    const double t_gamma = sigma * gaussian_radius(n, gamma);
    const double s = lp_norm(f, 2.0);  // = ||f_hat||_2 by Plancherel
    const double fr_f = fourier_ratio(f);

    CoverageReport rep;
    rep.radius = t_gamma;
    rep.regime_ok = s > t_gamma;
    rep.slack = 3.0 * std::sqrt(gamma * (1.0 - gamma) / static_cast<double>(trials));
    if (!rep.regime_ok) return rep;

    const Fft plan(n);
    std::vector<double> deviations;
    deviations.reserve(trials);
    std::size_t radius_hits = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Rng rng(mix_seed(seed, trial));
        std::vector<cplx> noise(n);
        for (auto& z : noise) z = complex_gaussian(rng, sigma);

        Signal sum = f;
        for (std::size_t x = 0; x < n; ++x) sum[x] += noise[x];
        const double fr_sum = fourier_ratio(sum);
        const double dev = std::abs(fr_sum - fr_f);
        deviations.push_back(dev);

        plan.forward(noise);
        double t_sq = 0.0, b1 = 0.0;
        for (const auto& z : noise) {
            t_sq += std::norm(z);
            b1 += std::abs(z);
        }
        const double t = std::sqrt(t_sq);
        if (t <= t_gamma) ++radius_hits;
        const double fr_n = t > 0.0 ? b1 / t : 0.0;
        const double bound = (fr_n + fr_f) * t_gamma / (s - t_gamma);
        if (dev > bound) ++rep.violations;
    }
    rep.trials = trials;
    rep.violation_rate = static_cast<double>(rep.violations) / static_cast<double>(trials);
    rep.radius_coverage = static_cast<double>(radius_hits) / static_cast<double>(trials);
    rep.pass = rep.violation_rate <= gamma + rep.slack;
    rep.median_deviation = detail::median_of(std::move(deviations));
    return rep;
}

struct SmoothingReport {
    std::size_t copies = 0;
    std::size_t trials = 0;
    double mean_mse = 0.0;
    double expected_mse = 0.0;  // N sigma^2 / n
    double mse_standard_error = 0.0;
    bool mse_within_3se = false;
    double radius_coverage = 0.0;  // freq of ||avg - s||_2 <= (sigma/sqrt(n)) r_gamma
    double radius = 0.0;
};

inline SmoothingReport smoothing_experiment(const Signal& s, double sigma, std::size_t copies,
                                            double gamma, std::size_t trials, std::uint64_t seed) {
    if (copies < 1) throw std::invalid_argument("smoothing_experiment: need n >= 1 copies");
    const std::size_t n = s.size();
    SmoothingReport rep;
    rep.copies = copies;
    rep.trials = trials;
    rep.expected_mse = static_cast<double>(n) * sigma * sigma / static_cast<double>(copies);
    rep.radius = sigma / std::sqrt(static_cast<double>(copies)) * gaussian_radius(n, gamma);

    double sum = 0.0, sum_sq = 0.0;
    std::size_t hits = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Rng rng(mix_seed(seed, trial));
        Signal avg = Signal::zeros(n);
        for (std::size_t c = 0; c < copies; ++c)
            for (std::size_t x = 0; x < n; ++x) avg[x] += s[x] + complex_gaussian(rng, sigma);
        double mse = 0.0;
        const double inv = 1.0 / static_cast<double>(copies);
        for (std::size_t x = 0; x < n; ++x) mse += std::norm(avg[x] * inv - s[x]);
        sum += mse;
        sum_sq += mse * mse;
        if (std::sqrt(mse) <= rep.radius) ++hits;
    }
    const double t = static_cast<double>(trials);
    rep.mean_mse = sum / t;
    const double var = std::max(0.0, sum_sq / t - rep.mean_mse * rep.mean_mse);
    rep.mse_standard_error = std::sqrt(var / t);
    rep.mse_within_3se = std::abs(rep.mean_mse - rep.expected_mse) <= 3.0 * rep.mse_standard_error;
    rep.radius_coverage = static_cast<double>(hits) / t;
    return rep;
}

// Per-trial check of |FR(avg) - FR(s)| against (2 sigma r_gamma / (sqrt(n)
// ||s||_2)) (FR(avg noise) + FR(s)), with the realized FR of the averaged
// noise.
inline CoverageReport fr_of_average_experiment(const Signal& s, double sigma, std::size_t copies,
                                               double gamma, std::size_t trials,
                                               std::uint64_t seed) {
    if (copies < 1) throw std::invalid_argument("fr_of_average_experiment: need n >= 1 copies");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("fr_of_average_experiment: gamma must be in (0, 1)");
    const std::size_t n = s.size();
    const double r_gamma = gaussian_radius(n, gamma);
    const double s2 = lp_norm(s, 2.0);
    const double fr_s = fourier_ratio(s);
    const double root_copies = std::sqrt(static_cast<double>(copies));

    CoverageReport rep;
    rep.radius = sigma * r_gamma / root_copies;
    rep.regime_ok = s2 >= 2.0 * sigma * r_gamma;
    rep.slack = 3.0 * std::sqrt(gamma * (1.0 - gamma) / static_cast<double>(trials));
    if (!rep.regime_ok) return rep;

    std::vector<double> deviations;
    deviations.reserve(trials);
    std::size_t radius_hits = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Rng rng(mix_seed(seed, trial));
        Signal noise_avg = Signal::zeros(n);
        for (std::size_t c = 0; c < copies; ++c)
            for (std::size_t x = 0; x < n; ++x) noise_avg[x] += complex_gaussian(rng, sigma);
        const double inv = 1.0 / static_cast<double>(copies);
        for (std::size_t x = 0; x < n; ++x) noise_avg[x] *= inv;

        Signal avg = s;
        for (std::size_t x = 0; x < n; ++x) avg[x] += noise_avg[x];
        const double dev = std::abs(fourier_ratio(avg) - fr_s);
        deviations.push_back(dev);
        if (lp_norm(noise_avg, 2.0) <= rep.radius) ++radius_hits;
        const double fr_nbar = sigma > 0.0 && !noise_avg.is_zero() ? fourier_ratio(noise_avg) : 0.0;
        const double bound = 2.0 * sigma * r_gamma / (root_copies * s2) * (fr_nbar + fr_s);
        if (dev > bound) ++rep.violations;
    }
    rep.trials = trials;
    rep.violation_rate = static_cast<double>(rep.violations) / static_cast<double>(trials);
    rep.radius_coverage = static_cast<double>(radius_hits) / static_cast<double>(trials);
    rep.pass = rep.violation_rate <= gamma + rep.slack;
    rep.median_deviation = detail::median_of(std::move(deviations));
    return rep;
}

// Median |FR(avg) - FR(s)| for each copy count; the deviation shrinks at the
// 1/sqrt(n) rate.
inline std::vector<double> fr_of_average_sweep(const Signal& s, double sigma,
                                               const std::vector<std::size_t>& copy_counts,
                                               double gamma, std::size_t trials,
                                               std::uint64_t seed) {
    std::vector<double> medians;
    medians.reserve(copy_counts.size());
    for (std::size_t i = 0; i < copy_counts.size(); ++i) {
        const auto rep =
            fr_of_average_experiment(s, sigma, copy_counts[i], gamma, trials, mix_seed(seed, i));
        medians.push_back(rep.median_deviation);
    }
    return medians;
}

struct PerturbationSweepReport {
    std::size_t trials = 0;
    std::size_t applicable = 0;  // pairs with ||n_hat||_2 < ||f_hat||_2
    std::size_t violations = 0;
    double max_bound_ratio = 0.0;  // max deviation / bound over applicable pairs
};

// Property run of the deterministic inequality over random pairs; the count
// of violations must be zero.
inline PerturbationSweepReport perturbation_property_run(const std::vector<std::size_t>& sizes,
                                                         std::size_t trials_per_size,
                                                         std::uint64_t seed) {
    PerturbationSweepReport rep;
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        for (std::size_t t = 0; t < trials_per_size; ++t) {
            Rng rng(mix_seed(seed, si, t));
            const Signal f = random_gaussian_signal(sizes[si], rng);
            // scale noise to make t < s typical but not guaranteed
            const Signal nz = random_gaussian_signal(sizes[si], rng, 0.25 * rng.uniform(0.1, 2.0));
            const auto pr = perturbation_bound(f, nz);
            ++rep.trials;
            if (!pr.bound_applicable) continue;
            ++rep.applicable;
            if (pr.observed_deviation > pr.deterministic_bound + 1e-9 * std::max(1.0, pr.deterministic_bound))
                ++rep.violations;
            if (pr.deterministic_bound > 0.0)
                rep.max_bound_ratio =
                    std::max(rep.max_bound_ratio, pr.observed_deviation / pr.deterministic_bound);
        }
    }
    return rep;
}

}  // namespace frkit
