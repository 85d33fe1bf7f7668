#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "cpd/cusum_profile.hpp"
#include "cpd/error.hpp"
#include "cpd/oracle.hpp"
#include "test_support.hpp"

using namespace cpd;
using namespace cpd::testing;
using Catch::Approx;

namespace {

const std::vector<double> kStep{0, 0, 0, 1, 1, 1};

EstimatorConfig config(SeminormSpec norm, double gamma = 0.5) { return EstimatorConfig{gamma, std::move(norm)}; }

std::vector<EstimatorConfig> all_kinds(double gamma) {
    return {config(SeminormSpec::kolmogorov_smirnov(), gamma), config(SeminormSpec::lp(1.0), gamma),
            config(SeminormSpec::lp(2.0), gamma), config(SeminormSpec::weighted_moments(), gamma)};
}

}  // namespace

TEST_CASE("step series profile values", "[cusum]") {
    const Series x(kStep);
    const auto ks = config(SeminormSpec::kolmogorov_smirnov());
    const auto profile = compute_profile(x, ks);
    REQUIRE(profile.stats.size() == 5);
    CHECK(profile.at(3) == 0.5);
    CHECK(profile.at(1) == Approx(std::sqrt(5.0) / 6.0 * 0.6).epsilon(1e-15));
    CHECK(profile_at(x, ks, 3) == 0.5);
    CHECK(profile_at(x, config(SeminormSpec::lp(1.0)), 3) == 0.25);

    const auto est = estimate_change_point(x, ks);
    CHECK(est.k_hat == 3);
    CHECK(est.theta_hat == 0.5);

    const auto rev = estimate_change_point(Series(reversed(kStep)), ks);
    CHECK(rev.k_hat == 3);
    CHECK(rev.theta_hat == 0.5);
}

TEST_CASE("constant input gives the zero profile and the tie-break default", "[cusum]") {
    for (double c : {-3.5, 0.0, 7.0, 1e6}) {
        const Series x(std::vector<double>(7, c));
        for (const auto& cfg : all_kinds(0.5)) {
            const auto est = estimate_change_point(x, cfg);
            CHECK(std::all_of(est.profile.stats.begin(), est.profile.stats.end(), [](double s) { return s == 0.0; }));
            CHECK(est.k_hat == 1);
            CHECK(est.theta_hat == 1.0 / 7.0);
            CHECK(profile_at(x, cfg, 4) == 0.0);
        }
    }
}

TEST_CASE("two observations", "[cusum]") {
    const auto est = estimate_change_point(Series({1.0, 2.0}), config(SeminormSpec::kolmogorov_smirnov()));
    CHECK(est.profile.stats.size() == 1);
    CHECK(est.k_hat == 1);
    CHECK(est.theta_hat == 0.5);
}

TEST_CASE("gamma zero uses the plain split weight", "[cusum]") {
    const Series x({0.0, 1.0, 2.0});
    const auto ks = config(SeminormSpec::kolmogorov_smirnov(), 0.0);
    // k = 1: max over thresholds of |L/k - R/(n-k)| is 1, weight 1/3 * 2/3.
    CHECK(profile_at(x, ks, 1) == Approx(2.0 / 9.0).epsilon(1e-15));
    CHECK(profile_at(x, ks, 2) == Approx(2.0 / 9.0).epsilon(1e-15));
    // L1, k = 1: |d| = (0, 1, 0.5), mean 0.5.
    CHECK(profile_at(x, config(SeminormSpec::lp(1.0), 0.0), 1) == Approx(1.0 / 9.0).epsilon(1e-15));
    // First moment only: mean difference 0 - 1.5.
    const auto mean_only = config(SeminormSpec::weighted_moments({1.0}), 0.0);
    CHECK(profile_at(x, mean_only, 1) == Approx(2.0 / 9.0 * 1.5).epsilon(1e-15));
    CHECK(split_weight(1, 3, 0.0) == Approx(2.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("invalid inputs", "[cusum]") {
    CHECK_THROWS_AS(Series({1.0}), InvalidInput);
    CHECK_THROWS_AS(Series({1.0, std::nan("")}), InvalidInput);
    CHECK_THROWS_AS(Series({1.0, std::numeric_limits<double>::infinity()}), InvalidInput);
    const Series x(kStep);
    CHECK_THROWS_AS(profile_at(x, config(SeminormSpec::kolmogorov_smirnov()), 0), InvalidInput);
    CHECK_THROWS_AS(profile_at(x, config(SeminormSpec::kolmogorov_smirnov()), 6), InvalidInput);
    CHECK_THROWS_AS(compute_profile(x, config(SeminormSpec::kolmogorov_smirnov(), 1.0)), InvalidInput);
    CHECK_THROWS_AS(compute_profile(x, config(SeminormSpec::kolmogorov_smirnov(), -0.1)), InvalidInput);
    CHECK_THROWS_AS(compute_profile(x, config(SeminormSpec::lp(0.9))), InvalidInput);
}

TEST_CASE("first argmax keeps the smallest maximiser", "[cusum]") {
    CHECK(first_argmax(std::vector<double>{1, 3, 3, 2}) == 2);
    CHECK(first_argmax(std::vector<double>{0, 0, 0}) == 1);
    CHECK(first_argmax(std::vector<double>{5}) == 1);
}

TEST_CASE("reversal maps the profile by k to n-k exactly", "[cusum][property]") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<std::size_t> len(2, 120);
    for (int trial = 0; trial < 120; ++trial) {
        const auto v = random_mixed(rng, len(rng), trial % 2 == 0);
        const Series x(v), xr(reversed(v));
        const std::size_t n = v.size();
        for (const auto& cfg : all_kinds(0.25 * (trial % 4))) {
            const auto a = compute_profile(x, cfg);
            const auto b = compute_profile(xr, cfg);
            for (std::size_t k = 1; k < n; ++k) {
                INFO("n=" << n << " k=" << k << " norm=" << cfg.norm.label());
                REQUIRE(same_bits(a.at(k), b.at(n - k)));
            }
        }
    }
}

TEST_CASE("strictly increasing maps leave indicator profiles unchanged", "[cusum][property]") {
    std::mt19937_64 rng(22);
    std::uniform_int_distribution<std::size_t> len(2, 150);
    for (int trial = 0; trial < 120; ++trial) {
        const auto v = random_mixed(rng, len(rng), trial % 3 == 0);
        std::vector<double> mapped(v.size()), shifted(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            mapped[i] = std::exp(v[i]) * 3.0 - 11.0;
            shifted[i] = v[i] + 100.0;
        }
        for (const auto& norm : {SeminormSpec::kolmogorov_smirnov(), SeminormSpec::lp(1.0), SeminormSpec::lp(2.5)}) {
            const auto cfg = config(norm, 0.5);
            const auto a = compute_profile(Series(v), cfg);
            const auto b = compute_profile(Series(mapped), cfg);
            REQUIRE(a.stats.size() == b.stats.size());
            for (std::size_t k = 0; k < a.stats.size(); ++k) REQUIRE(same_bits(a.stats[k], b.stats[k]));
            CHECK(estimate_change_point(Series(shifted), cfg).k_hat == estimate_change_point(Series(v), cfg).k_hat);
        }
    }
}

TEST_CASE("profile entries respect the weight bound", "[cusum][property]") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::size_t> len(2, 150);
    for (int trial = 0; trial < 100; ++trial) {
        const auto v = random_mixed(rng, len(rng), trial % 2 == 1);
        for (double gamma : {0.0, 0.5, 0.9}) {
            const double bound = std::pow(0.25, 1.0 - gamma);
            for (const auto& norm : {SeminormSpec::kolmogorov_smirnov(), SeminormSpec::lp(1.5)}) {
                const auto profile = compute_profile(Series(v), config(norm, gamma));
                for (double s : profile.stats) {
                    CHECK(s >= 0.0);
                    CHECK(s <= bound * (1.0 + 1e-12));
                }
            }
        }
    }
}

TEST_CASE("estimate agrees with the brute-force evaluation on small inputs", "[cusum][oracle]") {
    std::mt19937_64 rng(24);
    std::uniform_int_distribution<std::size_t> len(2, 60);
    for (int trial = 0; trial < 60; ++trial) {
        const auto v = random_mixed(rng, len(rng), trial % 2 == 0);
        for (const auto& cfg : all_kinds(0.75)) {
            const auto fast = estimate_change_point(Series(v), cfg);
            const auto slow = oracle::brute_force_profile(v, cfg);
            REQUIRE(slow.size() == fast.profile.stats.size());
            for (std::size_t k = 0; k < slow.size(); ++k) CHECK(std::abs(slow[k] - fast.profile.stats[k]) <= 1e-10);
            CHECK(oracle::brute_force_argmax(slow) == fast.k_hat);
        }
    }
}

TEST_CASE("sharp mean shift is located", "[cusum]") {
    std::mt19937_64 rng(25);
    std::normal_distribution<double> noise(0.0, 0.1);
    std::vector<double> v(300);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (i < 120 ? 0.0 : 1.0) + noise(rng);
    for (const auto& cfg : all_kinds(0.5)) CHECK(estimate_change_point(Series(v), cfg).k_hat == 120);
}
