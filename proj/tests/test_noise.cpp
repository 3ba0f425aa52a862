#include <doctest.h>

#include <cmath>
#include <vector>

#include "frkit/noise.hpp"
#include "oracles.hpp"

using frkit::cplx;
using frkit::Signal;

TEST_SUITE("noise") {

TEST_CASE("zero-sigma noise is the identity") {
    const Signal f = oracle::random_signal(32, 1);
    const Signal g = frkit::add_complex_gaussian(f, 0.0, 7);
    CHECK(g == f);
}

TEST_CASE("noise second moment matches sigma^2 in both domains") {
    const std::size_t n = 10000;
    const Signal zero = Signal::zeros(n);
    const Signal noise = frkit::add_complex_gaussian(zero, 1.0, 99);
    double mean_sq = 0.0;
    for (const auto& z : noise.values()) mean_sq += std::norm(z);
    mean_sq /= static_cast<double>(n);
    // Var|n|^2 = sigma^4, so the mean-of-n estimator has SE sigma^2/sqrt(n)
    CHECK(std::abs(mean_sq - 1.0) <= 4.0 / std::sqrt(static_cast<double>(n)));

    const auto transformed = frkit::dft(noise);
    double mean_sq_hat = 0.0;
    for (const auto& z : transformed.values()) mean_sq_hat += std::norm(z);
    mean_sq_hat /= static_cast<double>(n);
    CHECK(std::abs(mean_sq_hat - 1.0) <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("perturbation report on degenerate noise") {
    const Signal f = oracle::random_signal(64, 5);
    const Signal zero = Signal::zeros(64);
    const auto r0 = frkit::perturbation_bound(f, zero);
    CHECK(r0.bound_applicable);
    CHECK(r0.deterministic_bound == doctest::Approx(0.0));
    CHECK(r0.observed_deviation == doctest::Approx(0.0));

    // n = alpha f leaves FR unchanged by scale invariance
    Signal scaled = f;
    for (auto& z : scaled.values()) z *= 0.01;
    const auto r1 = frkit::perturbation_bound(f, scaled);
    CHECK(r1.observed_deviation <= 1e-10);
    CHECK(r1.observed_deviation <= r1.deterministic_bound + 1e-12);

    // overwhelming noise: bound flagged inapplicable
    Signal huge = f;
    for (auto& z : huge.values()) z *= 50.0;
    const auto r2 = frkit::perturbation_bound(f, huge);
    CHECK_FALSE(r2.bound_applicable);
}

TEST_CASE("deterministic perturbation inequality never fails") {
    const auto rep = frkit::perturbation_property_run({16, 64, 256}, 100, 2025);
    CHECK(rep.trials == 300);
    CHECK(rep.applicable > 250);  // noise is scaled to sit below the signal most of the time
    CHECK(rep.violations == 0);
    CHECK(rep.max_bound_ratio <= 1.0);
}

TEST_CASE("gaussian deviation coverage") {
    const Signal f = oracle::random_signal(64, 17);
    const auto rep = frkit::gaussian_deviation_experiment(f, 0.02, 0.1, 1000, 31);
    REQUIRE(rep.regime_ok);
    CHECK(rep.trials == 1000);
    CHECK(rep.pass);
    CHECK(rep.violation_rate <= 0.1 + rep.slack);
    CHECK(rep.radius_coverage >= 0.9 - rep.slack);

    const auto silent = frkit::gaussian_deviation_experiment(f, 0.0, 0.1, 200, 32);
    CHECK(silent.violations == 0);
    CHECK(silent.median_deviation == doctest::Approx(0.0));

    // noise larger than the signal: regime violation reported, not thrown
    const auto loud = frkit::gaussian_deviation_experiment(f, 100.0, 0.1, 10, 33);
    CHECK_FALSE(loud.regime_ok);
    CHECK(loud.trials == 0);
}

TEST_CASE("averaging basics") {
    const Signal f = oracle::random_signal(16, 3);
    CHECK(frkit::average_signals({f}) == f);
    CHECK_THROWS_AS(frkit::average_signals({f, oracle::random_signal(8, 4)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(frkit::average_signals({}), std::invalid_argument);
}

TEST_CASE("averaging MSE matches N sigma^2 / n") {
    const Signal s = oracle::random_signal(256, 9);
    const auto rep = frkit::smoothing_experiment(s, 1.0, 100, 0.1, 200, 47);
    CHECK(rep.expected_mse == doctest::Approx(2.56));
    CHECK(rep.mse_within_3se);
    CHECK(rep.radius_coverage >= 0.9 - 3.0 * std::sqrt(0.09 / 200.0));
}

TEST_CASE("FR of the average approaches FR of the signal") {
    const Signal s = oracle::subgroup_indicator(5, 3);

    const auto rep = frkit::fr_of_average_experiment(s, 0.1, 4, 0.1, 500, 61);
    REQUIRE(rep.regime_ok);
    CHECK(rep.pass);

    // single-copy bound from part (i)
    const auto single = frkit::fr_of_average_experiment(s, 0.1, 1, 0.1, 500, 62);
    REQUIRE(single.regime_ok);
    CHECK(single.pass);

    // sigma = 0 collapses every deviation
    const auto quiet = frkit::fr_of_average_experiment(s, 0.0, 4, 0.1, 100, 63);
    CHECK(quiet.violations == 0);
    CHECK(quiet.median_deviation == doctest::Approx(0.0));

    const auto medians = frkit::fr_of_average_sweep(s, 0.1, {1, 4, 16, 64}, 0.1, 500, 64);
    REQUIRE(medians.size() == 4);
    CHECK(medians[1] < medians[0]);
    CHECK(medians[2] < medians[1]);
    CHECK(medians[3] < medians[2]);
}

TEST_CASE("error paths") {
    const Signal f = oracle::random_signal(16, 2);
    CHECK_THROWS_AS(frkit::add_complex_gaussian(f, -1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(frkit::perturbation_bound(Signal::zeros(16), f), std::domain_error);
    CHECK_THROWS_AS(frkit::gaussian_deviation_experiment(f, 1.0, 0.0, 10, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(frkit::fr_of_average_experiment(f, 1.0, 0, 0.1, 10, 1),
                    std::invalid_argument);
}

}  // TEST_SUITE
