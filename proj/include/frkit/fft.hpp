#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace frkit {

using cplx = std::complex<double>;

// Unitary DFT on Z_N for arbitrary N >= 1: iterative radix-2 when N is a
// power of two, Bluestein's chirp-z reduction to a power-of-two convolution
// otherwise. Both directions carry the 1/sqrt(N) factor, so forward and
// inverse are exact adjoints of each other.
//
// The class is an immutable plan (twiddle/chirp tables); transforms do not
// mutate it, so one plan may be shared across threads.
class Fft {
public:
    explicit Fft(std::size_t n) : n_(n) {
        if (n == 0) throw std::invalid_argument("Fft: transform length must be positive");
        pow2_ = (n & (n - 1)) == 0;
        if (pow2_) {
            m_ = n;
            build_pow2_tables();
        } else {
            m_ = 1;
            while (m_ < 2 * n - 1) m_ <<= 1;
            build_pow2_tables();
            build_chirp_tables();
        }
    }

    std::size_t size() const { return n_; }

    // f -> f_hat, f_hat(m) = N^{-1/2} sum_x e^{-2pi i x m / N} f(x)
    void forward(std::vector<cplx>& a) const {
        check(a);
        raw_forward(a);
        scale(a);
    }

    // f_hat -> f, f(x) = N^{-1/2} sum_m e^{+2pi i x m / N} f_hat(m)
    void inverse(std::vector<cplx>& a) const {
        check(a);
        for (auto& z : a) z = std::conj(z);
        raw_forward(a);
        for (auto& z : a) z = std::conj(z);
        scale(a);
    }

private:
    void check(const std::vector<cplx>& a) const {
        if (a.size() != n_) throw std::invalid_argument("Fft: length mismatch with plan");
    }

    void scale(std::vector<cplx>& a) const {
        const double s = 1.0 / std::sqrt(static_cast<double>(n_));
        for (auto& z : a) z *= s;
    }

    void build_pow2_tables() {
        roots_.resize(m_ / 2 > 0 ? m_ / 2 : 1);
        const double base = -6.283185307179586476925286766559 / static_cast<double>(m_);
        for (std::size_t k = 0; k < m_ / 2; ++k)
            roots_[k] = std::polar(1.0, base * static_cast<double>(k));
        rev_.resize(m_);
        rev_[0] = 0;
        for (std::size_t i = 1; i < m_; ++i)
            rev_[i] = (rev_[i >> 1] >> 1) | ((i & 1) ? static_cast<std::uint32_t>(m_ >> 1) : 0u);
    }

    void build_chirp_tables() {
        // chirp_[k] = exp(-i pi k^2 / n); k^2 is reduced mod 2n so the angle
        // stays exact for large n.
        chirp_.resize(n_);
        const std::uint64_t period = 2 * static_cast<std::uint64_t>(n_);
        const double base = -3.1415926535897932384626433832795 / static_cast<double>(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) % period;
            chirp_[k] = std::polar(1.0, base * static_cast<double>(k2));
        }
        chirp_fft_.assign(m_, cplx{0.0, 0.0});
        for (std::size_t k = 0; k < n_; ++k) {
            chirp_fft_[k] = std::conj(chirp_[k]);
            if (k > 0) chirp_fft_[m_ - k] = std::conj(chirp_[k]);
        }
        pow2_raw(chirp_fft_, false);
    }

    // In-place unnormalized power-of-two transform of length m_.
    void pow2_raw(std::vector<cplx>& a, bool inverse) const {
        for (std::size_t i = 0; i < m_; ++i) {
            const std::size_t j = rev_[i];
            if (j > i) std::swap(a[i], a[j]);
        }
        for (std::size_t len = 2; len <= m_; len <<= 1) {
            const std::size_t half = len >> 1;
            const std::size_t step = m_ / len;
            for (std::size_t block = 0; block < m_; block += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    cplx w = roots_[j * step];
                    if (inverse) w = std::conj(w);
                    const cplx u = a[block + j];
                    const cplx v = a[block + j + half] * w;
                    a[block + j] = u + v;
                    a[block + j + half] = u - v;
                }
            }
        }
    }

    void raw_forward(std::vector<cplx>& a) const {
        if (pow2_) {
            pow2_raw(a, false);
            return;
        }
        std::vector<cplx> work(m_, cplx{0.0, 0.0});
        for (std::size_t j = 0; j < n_; ++j) work[j] = a[j] * chirp_[j];
        pow2_raw(work, false);
        for (std::size_t k = 0; k < m_; ++k) work[k] *= chirp_fft_[k];
        pow2_raw(work, true);
        const double inv_m = 1.0 / static_cast<double>(m_);
        for (std::size_t k = 0; k < n_; ++k) a[k] = chirp_[k] * work[k] * inv_m;
    }

    std::size_t n_;
    bool pow2_;
    std::size_t m_;
    std::vector<cplx> roots_;
    std::vector<std::uint32_t> rev_;
    std::vector<cplx> chirp_;
    std::vector<cplx> chirp_fft_;
};

}  // namespace frkit
