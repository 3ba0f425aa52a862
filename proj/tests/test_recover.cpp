#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "frkit/recover.hpp"
#include "oracles.hpp"

using frkit::cplx;
using frkit::IndexSet;
using frkit::SampleMask;
using frkit::Signal;
using frkit::Spectrum;

namespace {

Signal sparse_spectrum_signal(std::size_t n, int sparsity, std::uint64_t seed) {
    frkit::Rng rng(seed);
    Spectrum F = Spectrum::zeros(n);
    for (int placed = 0; placed < sparsity;) {
        const auto m = rng.uniform_index(n);
        if (F[m] == cplx{0.0, 0.0}) {
            F[m] = 1.0;
            ++placed;
        }
    }
    return frkit::idft(F);
}

double rel_l2_error(const Signal& got, const Signal& want) {
    double num = 0.0, den = 0.0;
    for (std::size_t x = 0; x < got.size(); ++x) {
        num += std::norm(got[x] - want[x]);
        den += std::norm(want[x]);
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_SUITE("recover") {

TEST_CASE("uniform sampling basics") {
    const auto one = frkit::sample_uniform(64, 1, 5);
    CHECK(one.indices.size() == 1);

    const auto a = frkit::sample_uniform(128, 40, 99);
    const auto b = frkit::sample_uniform(128, 40, 99);
    const auto c = frkit::sample_uniform(128, 40, 100);
    CHECK(a.indices.members() == b.indices.members());
    CHECK(a.indices.members() != c.indices.members());
    CHECK(a.indices.size() <= 40);
}

TEST_CASE("oversampling collects every index (coupon collector)") {
    int full = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto m = frkit::sample_uniform(32, 320, 7000 + seed);
        if (m.indices.size() == 32) ++full;
        REQUIRE(m.indices.size() >= 31);
    }
    CHECK(full >= 98);
}

TEST_CASE("bernoulli sampling basics") {
    const auto all = frkit::sample_bernoulli(50, 1.0, 3);
    CHECK(all.indices.size() == 50);

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto m = frkit::sample_bernoulli(10000, 0.5, 8000 + seed);
        const double dev = std::abs(static_cast<double>(m.indices.size()) - 5000.0);
        REQUIRE(dev <= 4.0 * std::sqrt(10000.0 * 0.25));
    }

    const auto a = frkit::sample_bernoulli(256, 0.3, 42);
    const auto b = frkit::sample_bernoulli(256, 0.3, 42);
    CHECK(a.indices.members() == b.indices.members());
}

TEST_CASE("full observation with eta = 0 returns the signal") {
    const Signal f = oracle::random_signal(64, 11);
    SampleMask mask;
    mask.indices = IndexSet::full(64);
    const auto res = frkit::impute(f, mask, 0.0);
    CHECK(rel_l2_error(res.x_star, f) < 1e-10);
    CHECK(res.constraint_residual < 1e-10);
}

TEST_CASE("noiseless recovery of spectrum-sparse signals") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Signal f = sparse_spectrum_signal(256, 5, 10000 + seed);
        const auto mask = frkit::sample_uniform(256, 120, 20000 + seed);
        const auto res = frkit::impute(frkit::apply_mask(f, mask.indices), mask, 0.0);
        REQUIRE(res.converged);
        REQUIRE(rel_l2_error(res.x_star, f) <= 1e-6);
        // f itself is feasible, so the minimum cannot exceed its objective
        CHECK(res.objective <= frkit::lp_norm(frkit::dft(f), 1.0) + 1e-6);
        CHECK(res.constraint_residual <= 1e-9);
    }
}

TEST_CASE("recovery works on non-power-of-two domains") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const Signal f = sparse_spectrum_signal(100, 3, 70000 + seed);
        const auto mask = frkit::sample_uniform(100, 60, 80000 + seed);
        const auto res = frkit::impute(frkit::apply_mask(f, mask.indices), mask, 0.0);
        REQUIRE(res.converged);
        REQUIRE(rel_l2_error(res.x_star, f) <= 1e-6);
    }
}

TEST_CASE("noisy-ball recovery satisfies the certified bound") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Signal f = sparse_spectrum_signal(256, 5, 30000 + seed);
        const double f_l2 = frkit::lp_norm(f, 2.0);
        const double eta = 0.1 * f_l2;
        const auto mask = frkit::sample_uniform(256, 120, 40000 + seed);
        const auto res = frkit::impute(frkit::apply_mask(f, mask.indices), mask, eta);
        REQUIRE(res.converged);
        CHECK(res.constraint_residual <= eta * (1.0 + 1e-6) + 1e-9);
        CHECK(res.certified_error_bound == doctest::Approx(11.47 * eta));
        double err = 0.0;
        for (std::size_t x = 0; x < 256; ++x) err += std::norm(res.x_star[x] - f[x]);
        REQUIRE(std::sqrt(err) <= res.certified_error_bound);
        CHECK(res.objective <= frkit::lp_norm(frkit::dft(f), 1.0) + 1e-6);
    }
}

TEST_CASE("iteration cap flags non-convergence without throwing") {
    const Signal f = sparse_spectrum_signal(128, 4, 1);
    const auto mask = frkit::sample_uniform(128, 60, 2);
    frkit::SolverConfig cfg;
    cfg.max_iters = 5;
    const auto res = frkit::impute(frkit::apply_mask(f, mask.indices), mask, 0.0, cfg);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations == 5);
}

TEST_CASE("restriction estimators are exact at p = 1") {
    const Signal f = oracle::random_signal(100, 21);
    const auto est = frkit::restricted_fr(f, 1.0);
    CHECK(oracle::rel_err(est.fr_estimate, frkit::fourier_ratio(f)) < 1e-12);
    CHECK(oracle::rel_err(est.fr_raw, frkit::fourier_ratio(f)) < 1e-12);
    CHECK(oracle::rel_err(est.l1_estimate, frkit::lp_norm(frkit::dft(f), 1.0)) < 1e-12);
    CHECK(oracle::rel_err(est.l2_estimate, frkit::lp_norm(f, 2.0)) < 1e-12);
}

TEST_CASE("restriction keeps FR within the theorem band on unimodular signals") {
    const std::size_t n = 4096;
    frkit::Rng rng(31);
    std::vector<cplx> phases(n);
    for (auto& z : phases) z = std::polar(1.0, rng.uniform(0.0, 6.2831853));
    const Signal f(std::move(phases));
    const double fr = frkit::fourier_ratio(f);
    const double l2 = frkit::lp_norm(f, 2.0);
    const double p = 0.3;
    // epsilon implied by p >= mu/eps^2 (log N + u)/N at C = 1, u = 3 (mu = 1)
    const double eps = std::sqrt((std::log(4096.0) + 3.0) / (p * 4096.0));
    int fr_fail = 0, l2_fail = 0;
    const int seeds = 40;
    for (int s = 0; s < seeds; ++s) {
        const auto mask = frkit::sample_bernoulli(n, p, 50000 + s);
        const auto est = frkit::restricted_fr(frkit::apply_mask(f, mask.indices), p);
        if (std::abs(est.fr_raw - fr) > 3.0 * eps * fr) ++fr_fail;
        if (std::abs(est.l2_estimate - l2) > eps * l2) ++l2_fail;
    }
    // theorem failure budget: 2 e^{-u} of the trials plus 3 binomial SEs
    const double budget = seeds * 2.0 * std::exp(-3.0) + 3.0 * std::sqrt(seeds * 0.1);
    CHECK(static_cast<double>(fr_fail) <= budget);
    CHECK(static_cast<double>(l2_fail) <= budget);
}

TEST_CASE("error paths") {
    const Signal f = oracle::random_signal(16, 1);
    CHECK_THROWS_AS(frkit::sample_uniform(16, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(frkit::sample_bernoulli(16, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(frkit::sample_bernoulli(16, 1.5, 1), std::invalid_argument);
    SampleMask empty;
    empty.indices = IndexSet::empty(16);
    CHECK_THROWS_AS(frkit::impute(f, empty, 0.0), std::invalid_argument);
    SampleMask wrong;
    wrong.indices = IndexSet::full(8);
    CHECK_THROWS_AS(frkit::impute(f, wrong, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(frkit::restricted_fr(f, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(frkit::restricted_fr(Signal::zeros(16), 0.5), std::domain_error);
}

}  // TEST_SUITE
