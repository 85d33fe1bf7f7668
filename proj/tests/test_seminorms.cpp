#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "cpd/error.hpp"
#include "cpd/seminorms.hpp"
#include "test_support.hpp"

using namespace cpd;
using Catch::Approx;

TEST_CASE("indicator norm on fixed vectors", "[seminorms]") {
    const auto ks = SeminormSpec::kolmogorov_smirnov();
    const auto l1 = SeminormSpec::lp(1.0);
    const std::vector<double> zero(6, 0.0);
    const std::vector<double> step{0, 0, 0, 1, 1, 1};

    CHECK(evaluate_indicator_norm(ks, zero) == 0.0);
    CHECK(evaluate_indicator_norm(ks, step) == 1.0);
    CHECK(evaluate_indicator_norm(l1, step) == 0.5);
    CHECK(evaluate_indicator_norm(SeminormSpec::lp(2.0), step) == Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(evaluate_indicator_norm(ks, std::vector<double>{0.25, -0.75, 0.5}) == 0.75);
}

TEST_CASE("moment norm on fixed vectors", "[seminorms]") {
    const auto two = SeminormSpec::weighted_moments({1.0, 0.5});
    CHECK(evaluate_moment_norm(two, std::vector<double>{0.0, 0.0}) == 0.0);
    CHECK(evaluate_moment_norm(two, std::vector<double>{0.2, -0.4}) == Approx(0.4).epsilon(1e-15));
    const auto three = SeminormSpec::weighted_moments({0.5, 0.25, 0.125});
    CHECK(evaluate_moment_norm(three, std::vector<double>{1, 1, 1}) == 0.875);
}

TEST_CASE("moment defaults are geometric weights with truncation 10", "[seminorms]") {
    const auto spec = SeminormSpec::weighted_moments();
    REQUIRE(spec.moment_weights == std::vector<double>{0.5, 0.25, 0.125, 0.0625});
    CHECK(spec.truncation == 10.0);
}

TEST_CASE("invalid inputs throw", "[seminorms]") {
    CHECK_THROWS_AS(evaluate_indicator_norm(SeminormSpec::kolmogorov_smirnov(), std::vector<double>{}),
                    InvalidInput);
    CHECK_THROWS_AS(evaluate_moment_norm(SeminormSpec::weighted_moments({1.0, 0.5}), std::vector<double>{1.0}),
                    InvalidInput);
    CHECK_THROWS_AS(SeminormSpec::lp(0.5).validate(), InvalidInput);
    CHECK_THROWS_AS(SeminormSpec::lp(std::nan("")).validate(), InvalidInput);
    CHECK_THROWS_AS(SeminormSpec::weighted_moments({1.0, 0.0}).validate(), InvalidInput);
    CHECK_THROWS_AS(SeminormSpec::weighted_moments({1.0}, 0.0).validate(), InvalidInput);
    SeminormSpec empty_weights;
    empty_weights.kind = NormKind::WeightedMoments;
    CHECK_THROWS_AS(empty_weights.validate(), InvalidInput);
}

TEST_CASE("seminorm parsing and labels", "[seminorms]") {
    CHECK(parse_seminorm("ks").kind == NormKind::KolmogorovSmirnov);
    CHECK(parse_seminorm("l1").p == 1.0);
    CHECK(parse_seminorm("lp:2.5").p == 2.5);
    CHECK(parse_seminorm("moments").moment_weights.size() == 4);
    const auto custom = parse_seminorm("moments:1,0.5@5");
    CHECK(custom.moment_weights == std::vector<double>{1.0, 0.5});
    CHECK(custom.truncation == 5.0);

    CHECK(parse_seminorm("ks").label() == "ks");
    CHECK(parse_seminorm("l1").label() == "l1");
    CHECK(parse_seminorm("lp:2.5").label() == "l2.5");
    CHECK(parse_seminorm("moments").label() == "moments");

    CHECK_THROWS_AS(parse_seminorm("sup"), InvalidInput);
    CHECK_THROWS_AS(parse_seminorm("l0.5"), InvalidInput);
    CHECK_THROWS_AS(parse_seminorm("lx"), InvalidInput);
    CHECK_THROWS_AS(parse_seminorm("moments:1,-1"), InvalidInput);
}

TEST_CASE("truncated power uses strict truncation", "[seminorms]") {
    CHECK(truncated_power(3.0, 2, 10.0) == 9.0);
    CHECK(truncated_power(-2.0, 3, 10.0) == -8.0);
    CHECK(truncated_power(10.0, 1, 10.0) == 0.0);
    CHECK(truncated_power(-10.0, 2, 10.0) == 0.0);
    CHECK(truncated_power(9.5, 1, 10.0) == 9.5);
}

namespace {

std::vector<double> random_d(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> len(1, 60);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<double> d(len(rng));
    for (double& v : d) v = val(rng);
    return d;
}

std::vector<SeminormSpec> indicator_specs() {
    return {SeminormSpec::kolmogorov_smirnov(), SeminormSpec::lp(1.0), SeminormSpec::lp(2.0),
            SeminormSpec::lp(3.5)};
}

}  // namespace

TEST_CASE("negation invariance, homogeneity and triangle inequality", "[seminorms][property]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> scale(-4.0, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d1 = random_d(rng);
        auto d2 = random_d(rng);
        d2.resize(d1.size(), 0.25);
        std::vector<double> neg(d1.size()), scaled(d1.size()), sum(d1.size());
        const double c = scale(rng);
        for (std::size_t i = 0; i < d1.size(); ++i) {
            neg[i] = -d1[i];
            scaled[i] = c * d1[i];
            sum[i] = d1[i] + d2[i];
        }
        for (const auto& spec : indicator_specs()) {
            const double base = evaluate_indicator_norm(spec, d1);
            CHECK(evaluate_indicator_norm(spec, neg) == base);
            CHECK(evaluate_indicator_norm(spec, scaled) == Approx(std::abs(c) * base).epsilon(1e-12));
            CHECK(evaluate_indicator_norm(spec, sum) <=
                  base + evaluate_indicator_norm(spec, d2) + 1e-12);
            CHECK(base >= 0.0);
        }

        const auto moments = SeminormSpec::weighted_moments({0.9, 0.3, 0.05});
        std::vector<double> delta(d1.begin(), d1.begin() + std::min<std::size_t>(3, d1.size()));
        delta.resize(3, 0.1);
        std::vector<double> delta_neg(3), delta_scaled(3);
        for (int p = 0; p < 3; ++p) {
            delta_neg[p] = -delta[p];
            delta_scaled[p] = c * delta[p];
        }
        const double m = evaluate_moment_norm(moments, delta);
        CHECK(evaluate_moment_norm(moments, delta_neg) == m);
        CHECK(evaluate_moment_norm(moments, delta_scaled) == Approx(std::abs(c) * m).epsilon(1e-12));
    }
}

TEST_CASE("Lp values increase with p towards the sup value", "[seminorms][property]") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = random_d(rng);
        const double ks = evaluate_indicator_norm(SeminormSpec::kolmogorov_smirnov(), d);
        double previous = 0.0;
        for (double p : {1.0, 2.0, 8.0, 64.0}) {
            const double v = evaluate_indicator_norm(SeminormSpec::lp(p), d);
            CHECK(v >= previous * (1.0 - 1e-12));
            CHECK(v <= ks * (1.0 + 1e-12));
            previous = v;
        }
        // ((1/n) sum |d|^p)^(1/p) >= n^(-1/p) max |d|
        const double floor64 = ks * std::pow(static_cast<double>(d.size()), -1.0 / 64.0);
        CHECK(previous >= floor64 * (1.0 - 1e-12));
    }
}

TEST_CASE("zero iff all entries vanish", "[seminorms][property]") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        auto d = random_d(rng);
        std::vector<double> zeros(d.size(), 0.0);
        for (const auto& spec : indicator_specs()) {
            CHECK(evaluate_indicator_norm(spec, zeros) == 0.0);
            CHECK(evaluate_indicator_norm(spec, d) > 0.0);
        }
    }
}
