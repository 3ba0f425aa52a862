#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "frkit/signal.hpp"

namespace frkit {

namespace detail {

inline void require_nonzero(bool zero, const char* msg) {
    if (zero) throw std::domain_error(msg);
}

}  // namespace detail

// FR(f) = ||f_hat||_1 / ||f_hat||_2, in [1, sqrt(N)]. Small values mean the
// spectrum is effectively sparse; sqrt(N) means flat spectral magnitude.
inline double fourier_ratio_of_spectrum(const Spectrum& F) {
    detail::require_nonzero(F.is_zero(), "zero signal has no Fourier ratio");
    return lp_norm(F, 1.0) / lp_norm(F, 2.0);
}

inline double fourier_ratio(const Signal& f) { return fourier_ratio_of_spectrum(dft(f)); }

struct BiFourierRatio {
    double bi_fr;
    double fr;
    double fr_hat;
};

// FR(f_hat) is FR of dft(f) treated as a time-domain signal and transformed
// again, matching the Z_pq computation in which FR(1_E) = sqrt(q) while
// FR of its transform is sqrt(p).
inline BiFourierRatio bi_fourier_ratio(const Signal& f) {
    const Spectrum F = dft(f);
    const double fr = fourier_ratio_of_spectrum(F);
    const double fr_hat = fourier_ratio(as_signal(F));
    return {std::min(fr, fr_hat), fr, fr_hat};
}

// Coherence mu(f) = N ||f||_inf^2 / ||f||_2^2, in [1, N].
inline double coherence(const Signal& f) {
    detail::require_nonzero(f.is_zero(), "zero signal has no coherence");
    const double linf = lp_norm(f, kInf);
    const double l2 = lp_norm(f, 2.0);
    return static_cast<double>(f.size()) * linf * linf / (l2 * l2);
}

// ns(x) = (||x||_1 / ||x||_2)^2; on a spectrum this equals FR(f)^2.
template <class Tag>
double numerical_sparsity(const Series<Tag>& g) {
    detail::require_nonzero(g.is_zero(), "zero vector has no numerical sparsity");
    const double r = lp_norm(g, 1.0) / lp_norm(g, 2.0);
    return r * r;
}

struct ConcentrationLevels {
    double a;  // L2 time-concentration defect on E: ||f||_{L2(E^c)} / ||f||_2
    double b;  // L1 spectral-concentration defect on S: ||f_hat||_{L1(S^c)} / ||f_hat||_1
    std::size_t e_size;
    std::size_t s_size;
    std::size_t domain_size;
};

inline ConcentrationLevels concentration_levels(const Signal& f, const IndexSet& E,
                                                const IndexSet& S) {
    detail::require_nonzero(f.is_zero(), "zero signal has no concentration levels");
    if (E.domain_size() != f.size() || S.domain_size() != f.size())
        throw std::out_of_range("concentration_levels: index set domain mismatch");
    const Spectrum F = dft(f);
    const double a = restricted_lp_norm(f, E.complement(), 2.0) / lp_norm(f, 2.0);
    const double b = restricted_lp_norm(F, S.complement(), 1.0) / lp_norm(F, 1.0);
    return {a, b, E.size(), S.size(), f.size()};
}

struct UncertaintyCheck {
    double lower;   // (1-a)^2 N / |E|; 0 when vacuous (a >= 1)
    double fr_sq;   // FR(f)^2
    double upper;   // |S| / (1-b)^2; +inf when vacuous (b >= 1)
    bool holds;
    bool lower_vacuous;
    bool upper_vacuous;
    double a;
    double b;
};

// Checks (1-a)^2 N/|E| <= FR(f)^2 <= |S|/(1-b)^2. The inequality is an
// unconditional inequality, so holds must come back true for every valid input.
inline UncertaintyCheck uncertainty_check(const Signal& f, const IndexSet& E,
                                          const IndexSet& S) {
    if (E.is_empty()) throw std::invalid_argument("uncertainty_check: E must be nonempty");
    const ConcentrationLevels c = concentration_levels(f, E, S);
    const double fr = fourier_ratio(f);
    const double fr_sq = fr * fr;
    const double n = static_cast<double>(f.size());

    UncertaintyCheck out{};
    out.a = c.a;
    out.b = c.b;
    out.fr_sq = fr_sq;
    out.lower_vacuous = !(c.a < 1.0);
    out.upper_vacuous = !(c.b < 1.0);
    out.lower = out.lower_vacuous ? 0.0 : (1.0 - c.a) * (1.0 - c.a) * n / static_cast<double>(c.e_size);
    out.upper = out.upper_vacuous ? kInf
                                  : static_cast<double>(c.s_size) / ((1.0 - c.b) * (1.0 - c.b));
    constexpr double rel = 1e-9;
    const bool low_ok = out.lower <= fr_sq + rel * fr_sq + 1e-12;
    const bool up_ok = out.upper_vacuous || fr_sq <= out.upper + rel * out.upper + 1e-12;
    out.holds = low_ok && up_ok;
    return out;
}

// FR(f) >= sqrt(N / |supp f|); threshold widens "support" for noisy data.
inline double support_lower_bound(const Signal& f, double threshold = 0.0) {
    detail::require_nonzero(f.is_zero(), "zero signal has no support lower bound");
    std::size_t count = 0;
    for (const auto& z : f.values())
        if (std::abs(z) > threshold) ++count;
    if (count == 0) throw std::domain_error("support_lower_bound: threshold removes all support");
    return std::sqrt(static_cast<double>(f.size()) / static_cast<double>(count));
}

// log2 of the statistical-query dimension bound for {f : FR(f) <= r} with
// eps = 1/(4(1+2r)). The raw value overflows double for r >= 2, hence the
// log-space result.
inline double sq_dimension_bound_log2(double r, std::size_t n) {
    if (!(r >= 1.0)) throw std::invalid_argument("sq_dimension_bound_log2: r must be >= 1");
    if (n == 0) throw std::invalid_argument("sq_dimension_bound_log2: N must be >= 1");
    const double eps = 1.0 / (4.0 * (1.0 + 2.0 * r));
    const double k = (r / eps) * (r / eps);
    constexpr double log2e = 1.4426950408889634074;
    return k * (std::log2(1.0 / eps) + log2e - std::log2(k) + std::log2(static_cast<double>(n)));
}

struct FrReport {
    double fr;
    double fr_hat;
    double bi_fr;
    double coherence;
    double numerical_sparsity;  // ns(f_hat) = FR(f)^2
    double l1_spectral_norm;
    double l2_norm;
    std::size_t domain_size;
};

inline FrReport analyze(const Signal& f) {
    const BiFourierRatio b = bi_fourier_ratio(f);
    const Spectrum F = dft(f);
    FrReport r{};
    r.fr = b.fr;
    r.fr_hat = b.fr_hat;
    r.bi_fr = b.bi_fr;
    r.coherence = coherence(f);
    r.numerical_sparsity = numerical_sparsity(F);
    r.l1_spectral_norm = lp_norm(F, 1.0);
    r.l2_norm = lp_norm(f, 2.0);
    r.domain_size = f.size();
    return r;
}

}  // namespace frkit
