#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "frkit/fourier_ratio.hpp"
#include "frkit/rng.hpp"
#include "frkit/signal.hpp"

namespace frkit {

// Sparse trigonometric polynomial P(x) = sum_i c_i chi(m_i x) on Z_N with
// chi(t) = e^{2 pi i t / N}. Frequencies may repeat (sampling draws with
// replacement); canonicalized() merges duplicates.
struct TrigPoly {
    struct Term {
        std::uint32_t freq;
        cplx coef;
    };

    std::vector<Term> terms;
    std::size_t domain_size = 0;

    std::size_t degree() const { return terms.size(); }

    TrigPoly canonicalized() const {
        std::map<std::uint32_t, cplx> merged;
        for (const auto& t : terms) merged[t.freq] += t.coef;
        TrigPoly out;
        out.domain_size = domain_size;
        out.terms.reserve(merged.size());
        for (const auto& [m, c] : merged) out.terms.push_back({m, c});
        return out;
    }

    // Spectrum induced by P: P = idft(S) with S(m_i) += sqrt(N) c_i.
    Spectrum induced_spectrum() const {
        Spectrum s = Spectrum::zeros(domain_size);
        const double root_n = std::sqrt(static_cast<double>(domain_size));
        for (const auto& t : terms) s[t.freq] += root_n * t.coef;
        return s;
    }
};

// Exact evaluation of the exponential sum on all of Z_N.
inline Signal eval(const TrigPoly& p) {
    const std::size_t n = p.domain_size;
    if (n == 0) throw std::invalid_argument("eval: polynomial has no domain");
    std::vector<cplx> unit(n);
    const double step = 6.283185307179586476925286766559 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) unit[j] = std::polar(1.0, step * static_cast<double>(j));
    Signal out = Signal::zeros(n);
    for (const auto& t : p.terms) {
        const std::size_t step_f = t.freq % n;
        std::size_t r = 0;
        for (std::size_t x = 0; x < n; ++x) {
            out[x] += t.coef * unit[r];
            r += step_f;
            if (r >= n) r -= n;
        }
    }
    return out;
}

inline cplx sgn(cplx z) { return z / std::abs(z); }

// Draws frequencies m with probability |F(m)| / ||F||_1 by inverse-CDF over a
// prefix-sum table; ties resolve to the lowest index, so a (seed, spectrum)
// pair is fully reproducible.
class SpectrumSampler {
public:
    explicit SpectrumSampler(const Spectrum& F) : n_(F.size()) {
        if (F.is_zero()) throw std::domain_error("cannot sample frequencies of a zero spectrum");
        prefix_.resize(n_);
        double acc = 0.0;
        for (std::size_t m = 0; m < n_; ++m) {
            acc += std::abs(F[m]);
            prefix_[m] = acc;
        }
        total_ = acc;
    }

    std::uint32_t sample(Rng& rng) const {
        const double u = rng.uniform() * total_;
        const auto it = std::upper_bound(prefix_.begin(), prefix_.end(), u);
        const std::size_t idx = static_cast<std::size_t>(it - prefix_.begin());
        return static_cast<std::uint32_t>(std::min(idx, n_ - 1));
    }

    double total_mass() const { return total_; }

private:
    std::size_t n_;
    std::vector<double> prefix_;
    double total_;
};

inline std::uint32_t sample_frequency(const Spectrum& F, std::uint64_t seed) {
    Rng rng(seed);
    return SpectrumSampler(F).sample(rng);
}

// Randomized approximant machinery from the probabilistic constructions: each
// draw contributes Z(x) = ||f_hat||_1 sgn(f_hat(m)) N^{-1/2} chi(mx) with
// m ~ |f_hat(m)| / ||f_hat||_1, so E P = f for P the k-sample average.
class ApproximantSampler {
public:
    explicit ApproximantSampler(const Signal& f)
        : spectrum_(dft(f)), sampler_(spectrum_), n_(f.size()) {
        l1_ = lp_norm(spectrum_, 1.0);
    }

    const Spectrum& spectrum() const { return spectrum_; }
    double spectral_l1() const { return l1_; }

    std::vector<std::uint32_t> draw_frequencies(std::size_t k, Rng& rng) const {
        std::vector<std::uint32_t> out(k);
        for (auto& m : out) m = sampler_.sample(rng);
        return out;
    }

    TrigPoly make_poly(const std::vector<std::uint32_t>& freqs) const {
        TrigPoly p;
        p.domain_size = n_;
        p.terms.reserve(freqs.size());
        const double amp = l1_ / std::sqrt(static_cast<double>(n_)) /
                           static_cast<double>(freqs.size());
        for (auto m : freqs) p.terms.push_back({m, amp * sgn(spectrum_[m])});
        return p;
    }

    TrigPoly draw(std::size_t k, Rng& rng) const { return make_poly(draw_frequencies(k, rng)); }

private:
    Spectrum spectrum_;
    SpectrumSampler sampler_;
    std::size_t n_;
    double l1_;
};

inline TrigPoly random_approximant(const Signal& f, std::size_t k, std::uint64_t seed) {
    if (k == 0) throw std::invalid_argument("random_approximant: k must be >= 1");
    Rng rng(seed);
    return ApproximantSampler(f).draw(k, rng);
}

namespace detail {

inline std::size_t degree_from_threshold(double threshold) {
    if (!(threshold < 1e8))
        throw std::runtime_error("approx: required degree exceeds 1e8; loosen eta");
    const double k = std::floor(std::max(0.0, threshold)) + 1.0;
    return static_cast<std::size_t>(k);
}

}  // namespace detail

// Degree thresholds; the chosen k is floor(threshold) + 1, the least integer
// strictly above the required threshold.
inline std::size_t l2_degree(const Signal& f, double eta) {
    const double fr = fourier_ratio(f);
    return detail::degree_from_threshold((fr * fr - 1.0) / (eta * eta));
}

inline std::size_t linf_degree(const Signal& f, double eta) {
    const Spectrum F = dft(f);
    const double ratio = lp_mu_norm(F, 1.0) / lp_norm(f, kInf);
    const double n = static_cast<double>(f.size());
    return detail::degree_from_threshold(8.0 * ratio * ratio * n * std::log(4.0 * n) /
                                         (eta * eta));
}

inline std::size_t l1_degree(const Signal& f, double eta) {
    const Spectrum F = dft(f);
    const double ratio = lp_norm(F, 1.0) / lp_norm(f, 1.0);
    const double n = static_cast<double>(f.size());
    return detail::degree_from_threshold(32.0 * 3.1415926535897932385 * ratio * ratio * n /
                                         (eta * eta));
}

struct TrigApproxResult {
    TrigPoly poly;
    double achieved;  // error of the returned polynomial in the mode's norm
    double target;    // eta * ||f|| in the mode's norm
    std::size_t k;
    int attempts;
    bool success;
};

namespace detail {

enum class ApproxNorm { L2, Linf, L1 };

inline double norm_of(const Signal& g, ApproxNorm mode) {
    switch (mode) {
        case ApproxNorm::L2: return lp_norm(g, 2.0);
        case ApproxNorm::Linf: return lp_norm(g, kInf);
        case ApproxNorm::L1: return lp_norm(g, 1.0);
    }
    return 0.0;
}

// The guarantees are existence statements via the probabilistic method, so we
// retry with fresh child seeds and keep the best attempt.
inline TrigApproxResult approx_retry(const Signal& f, double eta, std::uint64_t seed,
                                     int max_attempts, std::size_t k, ApproxNorm mode) {
    if (max_attempts < 1) throw std::invalid_argument("approx: max_attempts must be >= 1");
    ApproximantSampler sampler(f);
    const double target = eta * norm_of(f, mode);
    TrigApproxResult best{};
    best.k = k;
    best.target = target;
    best.achieved = kInf;
    best.success = false;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
        TrigPoly p = sampler.draw(k, rng);
        const Signal approx = eval(p);
        Signal residual = f;
        for (std::size_t x = 0; x < f.size(); ++x) residual[x] -= approx[x];
        const double err = norm_of(residual, mode);
        if (err < best.achieved) {
            best.achieved = err;
            best.poly = std::move(p);
        }
        best.attempts = attempt + 1;
        if (err < target) {
            best.success = true;
            break;
        }
    }
    return best;
}

inline void require_eta_unit(double eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("approx: eta must be in (0, 1)");
}

}  // namespace detail

inline TrigApproxResult approx_l2(const Signal& f, double eta, std::uint64_t seed,
                                  int max_attempts = 50) {
    detail::require_eta_unit(eta);
    return detail::approx_retry(f, eta, seed, max_attempts, l2_degree(f, eta),
                                detail::ApproxNorm::L2);
}

inline TrigApproxResult approx_linf(const Signal& f, double eta, std::uint64_t seed,
                                    int max_attempts = 50) {
    detail::require_eta_unit(eta);
    return detail::approx_retry(f, eta, seed, max_attempts, linf_degree(f, eta),
                                detail::ApproxNorm::Linf);
}

inline TrigApproxResult approx_l1(const Signal& f, double eta, std::uint64_t seed,
                                  int max_attempts = 50) {
    detail::require_eta_unit(eta);
    return detail::approx_retry(f, eta, seed, max_attempts, l1_degree(f, eta),
                                detail::ApproxNorm::L1);
}

// Large spectrum Gamma = {m : |f_hat(m)| >= eta ||f||_{L2(mu)}}, with the
// cardinality guarantee |Gamma| <= (FR(f)/eta) sqrt(N).
inline IndexSet large_spectrum(const Signal& f, double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("large_spectrum: eta must be positive");
    detail::require_nonzero(f.is_zero(), "zero signal has no large spectrum");
    const Spectrum F = dft(f);
    const double cut = eta * lp_mu_norm(f, 2.0);
    std::vector<std::uint32_t> members;
    for (std::size_t m = 0; m < F.size(); ++m)
        if (std::abs(F[m]) >= cut) members.push_back(static_cast<std::uint32_t>(m));
    IndexSet gamma(std::move(members), f.size());
    const double bound =
        fourier_ratio_of_spectrum(F) / eta * std::sqrt(static_cast<double>(f.size()));
    if (static_cast<double>(gamma.size()) > bound * (1.0 + 1e-9))
        throw std::logic_error("large_spectrum: cardinality bound violated");
    return gamma;
}

struct TruncationResult {
    TrigPoly poly;
    IndexSet gamma;
    double error;   // ||f - P||_2, equals the spectral tail energy
    double target;  // eta * ||f||_2
};

// Deterministic truncation to the large spectrum: P = N^{-1/2} sum_{m in
// Gamma} f_hat(m) chi(xm), with ||f - P||_2 <= eta ||f||_2 guaranteed.
inline TruncationResult spectral_truncation(const Signal& f, double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("spectral_truncation: eta must be positive");
    detail::require_nonzero(f.is_zero(), "cannot truncate the zero signal");
    const Spectrum F = dft(f);
    const double cut = eta * lp_mu_norm(f, 2.0);
    const double inv_root_n = 1.0 / std::sqrt(static_cast<double>(f.size()));
    TruncationResult out;
    out.poly.domain_size = f.size();
    std::vector<std::uint32_t> members;
    double tail = 0.0;
    for (std::size_t m = 0; m < F.size(); ++m) {
        if (std::abs(F[m]) >= cut) {
            members.push_back(static_cast<std::uint32_t>(m));
            out.poly.terms.push_back({static_cast<std::uint32_t>(m), inv_root_n * F[m]});
        } else {
            tail += std::norm(F[m]);
        }
    }
    out.gamma = IndexSet(std::move(members), f.size());
    out.error = std::sqrt(tail);
    out.target = eta * lp_norm(f, 2.0);
    if (out.error > out.target + 1e-9 * std::max(1.0, out.target))
        throw std::logic_error("spectral_truncation: error bound violated");
    return out;
}

// --- Rate-distortion encoder ------------------------------------------------

// Coefficients truncated toward zero to M binary fractional digits per real
// component. int_width is the two's-complement width (sign included) of the
// stored integers, chosen so every quantized component is exactly
// representable.
struct QuantizedPoly {
    struct Term {
        std::uint32_t freq;
        std::int64_t re;  // quantized component, value = re / 2^M
        std::int64_t im;
    };

    std::vector<Term> terms;
    std::size_t domain_size = 0;
    std::uint16_t m_bits = 0;     // fractional digits M
    std::uint16_t int_width = 0;  // total bits per stored component
    std::size_t bit_length = 0;   // length of the serialized byte stream, in bits

    TrigPoly decode() const {
        TrigPoly p;
        p.domain_size = domain_size;
        const double scale = std::ldexp(1.0, -static_cast<int>(m_bits));
        p.terms.reserve(terms.size());
        for (const auto& t : terms)
            p.terms.push_back({t.freq, cplx(static_cast<double>(t.re) * scale,
                                            static_cast<double>(t.im) * scale)});
        return p;
    }
};

namespace detail {

inline std::int64_t trunc_toward_zero(double x) {
    if (!(std::abs(x) < 9.0e18)) throw std::invalid_argument("quantization overflow");
    return static_cast<std::int64_t>(std::trunc(x));
}

inline std::uint16_t bits_for(std::int64_t v) {
    // minimal two's-complement width holding v, sign included
    std::uint64_t mag = v < 0 ? static_cast<std::uint64_t>(-(v + 1)) : static_cast<std::uint64_t>(v);
    std::uint16_t bits = 1;
    while (mag > 0) {
        ++bits;
        mag >>= 1;
    }
    return bits;
}

inline std::size_t freq_bits(std::size_t n) {
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;  // ceil(log2 N)
    return bits;
}

}  // namespace detail

// M = ceil(log2(sqrt(2 k N) / (eps ||f||_2))) makes N sum |c_i - c_i'|^2 <=
// eps^2 ||f||_2^2 unconditional for componentwise truncation (the sqrt(2)
// accounts for the two real components per coefficient).
inline int quantization_digits(std::size_t k, std::size_t n, double f_l2, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("rate_distortion_encode: eps must be positive");
    if (!(f_l2 > 0.0)) throw std::invalid_argument("rate_distortion_encode: f_l2 must be positive");
    const double m = std::ceil(std::log2(std::sqrt(2.0 * static_cast<double>(k) *
                                                   static_cast<double>(n)) /
                                         (eps * f_l2)));
    return std::max(0, static_cast<int>(m));
}

inline QuantizedPoly rate_distortion_encode(const TrigPoly& poly, double f_l2, double eps) {
    const TrigPoly p = poly.canonicalized();
    QuantizedPoly q;
    q.domain_size = p.domain_size;
    const std::size_t k = std::max<std::size_t>(1, p.degree());
    const int m_bits = quantization_digits(k, p.domain_size, f_l2, eps);
    q.m_bits = static_cast<std::uint16_t>(m_bits);
    const double scale = std::ldexp(1.0, m_bits);
    std::uint16_t width = 1;
    q.terms.reserve(p.terms.size());
    for (const auto& t : p.terms) {
        QuantizedPoly::Term qt;
        qt.freq = t.freq;
        qt.re = detail::trunc_toward_zero(t.coef.real() * scale);
        qt.im = detail::trunc_toward_zero(t.coef.imag() * scale);
        width = std::max({width, detail::bits_for(qt.re), detail::bits_for(qt.im)});
        q.terms.push_back(qt);
    }
    q.int_width = width;
    const std::size_t header_bytes = 4 + 4 + 2 + 2;
    const std::size_t freq_bytes = (detail::freq_bits(q.domain_size) + 7) / 8;
    const std::size_t comp_bytes = (static_cast<std::size_t>(width) + 7) / 8;
    q.bit_length = 8 * (header_bytes + q.terms.size() * (freq_bytes + 2 * comp_bytes));
    return q;
}

// Reported (not asserted) description-length shape from the rate-distortion
// bound: k log2((1+eps) N sqrt(k) / eps).
inline double rate_distortion_shape(std::size_t k, std::size_t n, double eps) {
    return static_cast<double>(k) *
           std::log2((1.0 + eps) * static_cast<double>(n) *
                     std::sqrt(static_cast<double>(k)) / eps);
}

// Byte stream: header {N: u32, k: u32, M: u16, W: u16} little-endian, then per
// term the frequency in ceil(log2 N) bits zero-padded to whole bytes followed
// by the two components as W-bit two's-complement integers, also byte-padded.
inline std::vector<std::uint8_t> serialize(const QuantizedPoly& q) {
    std::vector<std::uint8_t> out;
    auto put = [&out](std::uint64_t v, std::size_t bytes) {
        for (std::size_t i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    };
    put(static_cast<std::uint32_t>(q.domain_size), 4);
    put(static_cast<std::uint32_t>(q.terms.size()), 4);
    put(q.m_bits, 2);
    put(q.int_width, 2);
    const std::size_t freq_bytes = (detail::freq_bits(q.domain_size) + 7) / 8;
    const std::size_t comp_bytes = (static_cast<std::size_t>(q.int_width) + 7) / 8;
    for (const auto& t : q.terms) {
        put(t.freq, freq_bytes);
        put(static_cast<std::uint64_t>(t.re), comp_bytes);
        put(static_cast<std::uint64_t>(t.im), comp_bytes);
    }
    return out;
}

inline QuantizedPoly deserialize(const std::vector<std::uint8_t>& bytes) {
    std::size_t pos = 0;
    auto get = [&bytes, &pos](std::size_t n) -> std::uint64_t {
        if (pos + n > bytes.size()) throw std::runtime_error("deserialize: truncated stream");
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
        pos += n;
        return v;
    };
    QuantizedPoly q;
    q.domain_size = get(4);
    const std::size_t k = get(4);
    q.m_bits = static_cast<std::uint16_t>(get(2));
    q.int_width = static_cast<std::uint16_t>(get(2));
    if (q.domain_size == 0) throw std::runtime_error("deserialize: invalid domain size");
    const std::size_t freq_bytes = (detail::freq_bits(q.domain_size) + 7) / 8;
    const std::size_t comp_bytes = (static_cast<std::size_t>(q.int_width) + 7) / 8;
    auto sign_extend = [&](std::uint64_t raw) -> std::int64_t {
        const std::size_t bits = 8 * comp_bytes;
        if (bits >= 64) return static_cast<std::int64_t>(raw);
        const std::uint64_t sign_bit = std::uint64_t{1} << (bits - 1);
        if (raw & sign_bit) raw |= ~((sign_bit << 1) - 1);
        return static_cast<std::int64_t>(raw);
    };
    q.terms.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        QuantizedPoly::Term t;
        t.freq = static_cast<std::uint32_t>(get(freq_bytes));
        if (t.freq >= q.domain_size) throw std::runtime_error("deserialize: frequency out of range");
        t.re = sign_extend(get(comp_bytes));
        t.im = sign_extend(get(comp_bytes));
        q.terms.push_back(t);
    }
    if (pos != bytes.size()) throw std::runtime_error("deserialize: trailing bytes");
    const std::size_t header_bytes = 12;
    q.bit_length = 8 * (header_bytes + k * (freq_bytes + 2 * comp_bytes));
    return q;
}

}  // namespace frkit
