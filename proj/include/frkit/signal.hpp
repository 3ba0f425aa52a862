#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "frkit/fft.hpp"

namespace frkit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {

inline void require_finite(const std::vector<cplx>& v, const char* what) {
    for (const auto& z : v) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument(std::string(what) + ": entries must be finite");
    }
    if (v.empty()) throw std::invalid_argument(std::string(what) + ": length must be >= 1");
}

}  // namespace detail

// Complex-valued function on Z_N. Signal lives in the time domain, Spectrum
// in the frequency domain; they share the representation and the distinction
// is purely a role marker enforced by the type system.
template <class Tag>
class Series {
public:
    Series() = default;

    explicit Series(std::vector<cplx> values) : v_(std::move(values)) {
        detail::require_finite(v_, Tag::name());
    }

    static Series zeros(std::size_t n) {
        if (n == 0) throw std::invalid_argument(std::string(Tag::name()) + ": length must be >= 1");
        Series s;
        s.v_.assign(n, cplx{0.0, 0.0});
        return s;
    }

    std::size_t size() const { return v_.size(); }
    const cplx& operator[](std::size_t i) const { return v_[i]; }
    cplx& operator[](std::size_t i) { return v_[i]; }
    const std::vector<cplx>& values() const { return v_; }
    std::vector<cplx>& values() { return v_; }

    bool is_zero() const {
        return std::all_of(v_.begin(), v_.end(), [](const cplx& z) { return z == cplx{0.0, 0.0}; });
    }

    friend bool operator==(const Series& a, const Series& b) { return a.v_ == b.v_; }

private:
    std::vector<cplx> v_;
};

struct TimeTag {
    static const char* name() { return "Signal"; }
};
struct FreqTag {
    static const char* name() { return "Spectrum"; }
};

using Signal = Series<TimeTag>;
using Spectrum = Series<FreqTag>;

// Reinterpret a spectrum as a time-domain signal (used when transforming a
// spectrum again, e.g. FR(f_hat)).
inline Signal as_signal(const Spectrum& s) { return Signal(s.values()); }
inline Spectrum as_spectrum(const Signal& s) { return Spectrum(s.values()); }

inline Spectrum dft(const Signal& f) {
    auto v = f.values();
    detail::require_finite(v, "dft");
    Fft(v.size()).forward(v);
    return Spectrum(std::move(v));
}

inline Signal idft(const Spectrum& F) {
    auto v = F.values();
    detail::require_finite(v, "idft");
    Fft(v.size()).inverse(v);
    return Signal(std::move(v));
}

// Plan-reusing variants for hot loops.
inline Spectrum dft(const Signal& f, const Fft& plan) {
    auto v = f.values();
    plan.forward(v);
    return Spectrum(std::move(v));
}

inline Signal idft(const Spectrum& F, const Fft& plan) {
    auto v = F.values();
    plan.inverse(v);
    return Signal(std::move(v));
}

// Sorted duplicate-free subset of [0, N).
class IndexSet {
public:
    IndexSet() = default;

    IndexSet(std::vector<std::uint32_t> members, std::size_t domain_size)
        : members_(std::move(members)), n_(domain_size) {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
        if (!members_.empty() && members_.back() >= n_)
            throw std::out_of_range("IndexSet: member outside [0, N)");
    }

    static IndexSet full(std::size_t n) {
        std::vector<std::uint32_t> m(n);
        for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<std::uint32_t>(i);
        return IndexSet(std::move(m), n);
    }

    static IndexSet empty(std::size_t n) { return IndexSet({}, n); }

    std::size_t size() const { return members_.size(); }
    std::size_t domain_size() const { return n_; }
    bool is_empty() const { return members_.empty(); }
    const std::vector<std::uint32_t>& members() const { return members_; }

    bool contains(std::uint32_t x) const {
        return std::binary_search(members_.begin(), members_.end(), x);
    }

    IndexSet complement() const {
        std::vector<std::uint32_t> out;
        out.reserve(n_ - members_.size());
        std::size_t j = 0;
        for (std::uint32_t x = 0; x < n_; ++x) {
            if (j < members_.size() && members_[j] == x)
                ++j;
            else
                out.push_back(x);
        }
        return IndexSet(std::move(out), n_);
    }

private:
    std::vector<std::uint32_t> members_;
    std::size_t n_ = 0;
};

namespace detail {

inline void require_p(double p) {
    if (!(p >= 1.0))  // rejects NaN too
        throw std::invalid_argument("norm: p must be >= 1 or infinity");
}

}  // namespace detail

// ell^p norm, ||g||_p = (sum |g(x)|^p)^(1/p); p = infinity gives max |g|.
template <class Tag>
double lp_norm(const Series<Tag>& g, double p) {
    detail::require_p(p);
    if (p == kInf) {
        double m = 0.0;
        for (const auto& z : g.values()) m = std::max(m, std::abs(z));
        return m;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (const auto& z : g.values()) s += std::norm(z);
        return std::sqrt(s);
    }
    if (p == 1.0) {
        double s = 0.0;
        for (const auto& z : g.values()) s += std::abs(z);
        return s;
    }
    double s = 0.0;
    for (const auto& z : g.values()) s += std::pow(std::abs(z), p);
    return std::pow(s, 1.0 / p);
}

// Probability-normalized L^p(mu) norm, ((1/N) sum |g(x)|^p)^(1/p).
template <class Tag>
double lp_mu_norm(const Series<Tag>& g, double p) {
    detail::require_p(p);
    if (p == kInf) return lp_norm(g, p);
    return lp_norm(g, p) * std::pow(static_cast<double>(g.size()), -1.0 / p);
}

// Norm restricted to a subset E; the empty set sums to zero.
template <class Tag>
double restricted_lp_norm(const Series<Tag>& g, const IndexSet& E, double p) {
    detail::require_p(p);
    if (E.domain_size() != g.size())
        throw std::out_of_range("restricted_lp_norm: index set domain mismatch");
    if (p == kInf) {
        double m = 0.0;
        for (auto x : E.members()) m = std::max(m, std::abs(g[x]));
        return m;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (auto x : E.members()) s += std::norm(g[x]);
        return std::sqrt(s);
    }
    if (p == 1.0) {
        double s = 0.0;
        for (auto x : E.members()) s += std::abs(g[x]);
        return s;
    }
    double s = 0.0;
    for (auto x : E.members()) s += std::pow(std::abs(g[x]), p);
    return std::pow(s, 1.0 / p);
}

}  // namespace frkit
