#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "frkit/approx.hpp"
#include "frkit/signal.hpp"

namespace frkit {

// A set L in Z_N is dissociated when the only {-1,0,1}-linear combination of
// its elements that vanishes mod N is the trivial one; equivalently, all
// subset sums are distinct mod N. Checking is exponential in |L|, hence the
// enumeration guards below.

inline constexpr std::size_t kDissociationGuardDefault = 16;
inline constexpr std::size_t kDissociationGuardMax = 20;

namespace detail {

inline void check_guard(std::size_t size, std::size_t guard) {
    if (guard > kDissociationGuardMax)
        throw std::invalid_argument("dissociation guard above the hard cap of 20");
    if (size > guard)
        throw std::runtime_error(
            "dissociated-set enumeration guard exceeded; use a larger eta so the "
            "large spectrum shrinks");
}

// Recursive scan over all 3^k sign vectors, aborting on the first nontrivial
// vanishing combination.
inline bool no_vanishing_combination(const std::vector<std::uint32_t>& lambda, std::size_t n,
                                     std::size_t depth, std::uint64_t sum, bool nontrivial) {
    if (depth == lambda.size()) return !(nontrivial && sum % n == 0);
    const std::uint64_t v = lambda[depth] % n;
    return no_vanishing_combination(lambda, n, depth + 1, sum, nontrivial) &&
           no_vanishing_combination(lambda, n, depth + 1, sum + v, true) &&
           no_vanishing_combination(lambda, n, depth + 1, sum + (n - v) % n, true);
}

}  // namespace detail

inline bool is_dissociated(const std::vector<std::uint32_t>& lambda, std::size_t n,
                           std::size_t guard = kDissociationGuardDefault) {
    detail::check_guard(lambda.size(), guard);
    if (n == 0) throw std::invalid_argument("is_dissociated: N must be >= 1");
    return detail::no_vanishing_combination(lambda, n, 0, 0, false);
}

// All values of {-1,0,1}-linear combinations of lambda, as a membership table
// over Z_N. Grown one element at a time, so span[v] covers exactly the 3^k
// signed sums without materializing them individually.
inline std::vector<bool> signed_span(const std::vector<std::uint32_t>& lambda, std::size_t n,
                                     std::size_t guard = kDissociationGuardDefault) {
    detail::check_guard(lambda.size(), guard);
    if (n == 0) throw std::invalid_argument("signed_span: N must be >= 1");
    std::vector<bool> span(n, false);
    span[0] = true;
    for (auto raw : lambda) {
        const std::size_t v = raw % n;
        std::vector<bool> next = span;
        for (std::size_t s = 0; s < n; ++s) {
            if (!span[s]) continue;
            next[(s + v) % n] = true;
            next[(s + n - v) % n] = true;
        }
        span.swap(next);
    }
    return span;
}

inline bool verify_span(const IndexSet& gamma, const IndexSet& lambda,
                        std::size_t guard = kDissociationGuardDefault) {
    if (gamma.domain_size() != lambda.domain_size())
        throw std::invalid_argument("verify_span: domain mismatch");
    const auto span = signed_span(lambda.members(), lambda.domain_size(), guard);
    for (auto m : gamma.members())
        if (!span[m]) return false;
    return true;
}

// Greedy ascending scan of Gamma; m joins Lambda when Lambda + {m} stays
// dissociated. Given the current Lambda is dissociated, that holds exactly
// when m lies outside the signed span, so the span table doubles as the
// acceptance test. The result is maximal, which forces Gamma into the span.
inline IndexSet maximal_dissociated_subset(const IndexSet& gamma,
                                           std::size_t guard = kDissociationGuardDefault) {
    const std::size_t n = gamma.domain_size();
    if (n == 0) throw std::invalid_argument("maximal_dissociated_subset: N must be >= 1");
    if (guard > kDissociationGuardMax)
        throw std::invalid_argument("dissociation guard above the hard cap of 20");
    std::vector<std::uint32_t> lambda;
    std::vector<bool> span(n, false);
    span[0] = true;
    for (auto m : gamma.members()) {
        if (span[m]) continue;
        detail::check_guard(lambda.size() + 1, guard);
        lambda.push_back(m);
        std::vector<bool> next = span;
        for (std::size_t s = 0; s < n; ++s) {
            if (!span[s]) continue;
            next[(s + m) % n] = true;
            next[(s + n - m) % n] = true;
        }
        span.swap(next);
    }
    return IndexSet(std::move(lambda), n);
}

struct ChangBounds {
    double lognorm;                // eta^-2 (||f||_p' / ||f||_2)^2 log N with p' = log N/(log N - 1)
    std::optional<double> l2l1;    // present only under ||f||_1/||f||_2 <= sqrt(N)/e
};

// Right-hand sides of the generalized Chang bounds with the unknown absolute
// constant set to 1; callers report |Lambda| / bound rather than asserting.
inline ChangBounds chang_bounds(const Signal& f, double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("chang_bounds: eta must be positive");
    detail::require_nonzero(f.is_zero(), "chang_bounds: zero signal");
    const double n = static_cast<double>(f.size());
    if (f.size() < 3)
        throw std::invalid_argument("chang_bounds: N must be >= 3 for p = log N to be a valid exponent");
    const double log_n = std::log(n);
    const double p_prime = log_n / (log_n - 1.0);
    const double l2 = lp_norm(f, 2.0);
    const double l1 = lp_norm(f, 1.0);
    const double lp = lp_norm(f, p_prime);
    ChangBounds out;
    out.lognorm = (lp / l2) * (lp / l2) * log_n / (eta * eta);
    if (l1 / l2 <= std::sqrt(n) / 2.718281828459045235)
        out.l2l1 = (l1 / l2) * (l1 / l2) * std::log((l2 / l1) * (l2 / l1) * n) / (eta * eta);
    return out;
}

struct DissociationCertificate {
    IndexSet lambda;
    IndexSet gamma;
    bool span_verified = false;
    bool dissociation_verified = false;
    double bound_lognorm = 0.0;
    std::optional<double> bound_l2l1;
    double lambda_to_bound_ratio = 0.0;  // |Lambda| / bound_lognorm
};

// Full pipeline: large spectrum of f at eta, greedy maximal dissociated
// subset, both verifications by enumeration, and the bound evaluations.
inline DissociationCertificate certify_large_spectrum(const Signal& f, double eta,
                                                      std::size_t guard = kDissociationGuardDefault) {
    DissociationCertificate cert;
    cert.gamma = large_spectrum(f, eta);
    cert.lambda = maximal_dissociated_subset(cert.gamma, guard);
    cert.dissociation_verified = is_dissociated(cert.lambda.members(), f.size(), guard);
    cert.span_verified = verify_span(cert.gamma, cert.lambda, guard);
    if (f.size() >= 3) {
        const ChangBounds b = chang_bounds(f, eta);
        cert.bound_lognorm = b.lognorm;
        cert.bound_l2l1 = b.l2l1;
        cert.lambda_to_bound_ratio =
            b.lognorm > 0.0 ? static_cast<double>(cert.lambda.size()) / b.lognorm : 0.0;
    }
    return cert;
}

}  // namespace frkit
