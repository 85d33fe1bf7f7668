#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cpd/cusum_profile.hpp"
#include "cpd/error.hpp"
#include "cpd/generators.hpp"
#include "cpd/oracle.hpp"

using namespace cpd;
using Catch::Approx;

TEST_CASE("polynomial autocovariance values", "[generators]") {
    CHECK(polynomial_acf(0.4, 0) == 1.0);
    CHECK(polynomial_acf(3.0, 0) == 1.0);
    CHECK(polynomial_acf(0.4, 1) == Approx(0.933033).epsilon(1e-6));
    CHECK(polynomial_acf(0.4, 1) == std::pow(2.0, -0.1));
    // 101^(-3/8) = exp(-0.375 ln 101) = 0.1771656...
    CHECK(polynomial_acf(1.5, 10) == Approx(0.1771656).epsilon(1e-6));
    CHECK_THROWS_AS(polynomial_acf(0.0, 1), InvalidInput);
    CHECK_THROWS_AS(polynomial_acf(-1.0, 1), InvalidInput);
    for (double alpha : {0.2, 0.8, 2.0}) {
        for (std::size_t m = 1; m < 200; ++m) {
            CHECK(polynomial_acf(alpha, m) > 0.0);
            CHECK(polynomial_acf(alpha, m) < polynomial_acf(alpha, m - 1));
        }
    }
}

TEST_CASE("change application", "[generators]") {
    const TransformPair def;
    CHECK(apply_change(std::vector<double>{1, 1, 1, 1}, 0.5, def) == std::vector<double>{0, 0, 0, 0});
    CHECK(apply_change(std::vector<double>{2, 2}, 0.5, def) == std::vector<double>{3, -3});
    CHECK(change_index(6, 0.5) == 3);
    CHECK(change_index(100, 0.29) == 29);
    CHECK(change_index(7, 0.5) == 3);
    CHECK_THROWS_AS(apply_change(std::vector<double>{1, 2}, 0.0, def), InvalidInput);
    CHECK_THROWS_AS(apply_change(std::vector<double>{1, 2}, 1.0, def), InvalidInput);

    CHECK(parse_transform("identity") == Transform::Identity);
    CHECK(transform_name(parse_transform("square-minus-one")) == "square-minus-one");
    CHECK(apply_transform(Transform::Negate, 2.5) == -2.5);
    CHECK_THROWS_AS(parse_transform("cube"), InvalidInput);
}

TEST_CASE("Durbin-Levinson matches the Cholesky factor", "[generators][oracle]") {
    for (double alpha : {0.4, 0.8, 1.5}) {
        const auto eps = normal_innovations(256, SeedSpec{5, 0}, 0);
        const auto dl = durbin_levinson_filter(AcfSpec{alpha}, eps);
        const auto ch = oracle::cholesky_sample(AcfSpec{alpha}, eps);
        double worst = 0.0;
        for (std::size_t i = 0; i < eps.size(); ++i) worst = std::max(worst, std::abs(dl[i] - ch[i]));
        INFO("alpha=" << alpha);
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("Durbin-Levinson first steps", "[generators]") {
    const std::vector<double> eps{0.3, -1.2};
    const auto y = durbin_levinson_filter(AcfSpec{0.4}, eps);
    const double r1 = std::pow(2.0, -0.1);
    CHECK(y[0] == 0.3);
    CHECK(y[1] == Approx(r1 * 0.3 + std::sqrt(1.0 - r1 * r1) * -1.2).epsilon(1e-13));
    CHECK(durbin_levinson_filter(AcfSpec{0.4}, std::vector<double>{}).empty());
    CHECK_THROWS_AS(durbin_levinson_sample(AcfSpec{0.4}, 0, SeedSpec{}), InvalidInput);
}

TEST_CASE("Gaussian kind without an acf is white noise", "[generators]") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::GaussianSubordinated;
    spec.n = 3;
    spec.transforms = {Transform::Identity, Transform::Identity};
    const auto out = generate(spec, SeedSpec{9, 2});
    CHECK(out.values == normal_innovations(3, SeedSpec{9, 2}, 0));
}

TEST_CASE("generation is a pure function of the seed", "[generators]") {
    for (auto kind : {GeneratorKind::Iid, GeneratorKind::GaussianSubordinated, GeneratorKind::LinearProcess}) {
        GeneratorSpec spec;
        spec.kind = kind;
        spec.n = 300;
        spec.acf = AcfSpec{0.8};
        spec.linear.lag_truncation = 5;
        const auto a = generate(spec, SeedSpec{42, 7});
        const auto b = generate(spec, SeedSpec{42, 7});
        const auto c = generate(spec, SeedSpec{42, 8});
        CHECK(a.values == b.values);
        CHECK(a.values != c.values);
        CHECK(a.true_change_index == 150);
    }
}

TEST_CASE("linear process is a direct convolution of padded innovations", "[generators][oracle]") {
    LinearProcessSpec spec;
    spec.beta = 2.0;
    spec.lag_truncation = 2;
    const SeedSpec seed{17, 3};
    const std::size_t n = 4;
    const auto x = linear_process_sample(n, 0.5, spec, seed);
    const auto e1 = normal_innovations(n + 4, seed, 0);
    const auto e2 = normal_innovations(n + 4, seed, 1);
    // b_k for k = -2..2: 1/4, 1, 1, 1, 1/4; post-change off-centre signs flip.
    const double pre[5] = {0.25, 1.0, 1.0, 1.0, 0.25};
    const double post[5] = {-0.25, -1.0, 1.0, -1.0, -0.25};
    for (std::size_t i = 0; i < n; ++i) {
        const bool before = i < 2;
        const auto& e = before ? e1 : e2;
        double expected = 0.0;
        // X_{i+1} = sum_k b_k eps_{i+1-k}; padded index of eps_j is j + L - 1.
        for (int k = -2; k <= 2; ++k) {
            const double b = before ? pre[k + 2] : post[k + 2];
            expected += b * e[static_cast<std::size_t>(static_cast<int>(i) + 2 - k)];
        }
        CHECK(x[i] == Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("linear process edge cases", "[generators]") {
    LinearProcessSpec identity;
    identity.lag_truncation = 0;
    identity.switch_stream = false;
    CHECK(linear_process_sample(6, 0.5, identity, SeedSpec{1, 1}) == normal_innovations(6, SeedSpec{1, 1}, 0));

    LinearProcessSpec bad;
    bad.beta = 0.5;
    CHECK_THROWS_AS(linear_process_sample(6, 0.5, bad, SeedSpec{}), InvalidInput);
    CHECK(linear_process_coefficients(1.0, 3, true) == std::vector<double>{-1.0 / 3, -0.5, -1, 1, -1, -0.5, -1.0 / 3});
}

TEST_CASE("linear process variance matches the coefficient energy", "[generators]") {
    LinearProcessSpec spec;
    spec.beta = 1.0;
    spec.lag_truncation = 4;
    const auto b = linear_process_coefficients(spec.beta, spec.lag_truncation, false);
    const double target = std::inner_product(b.begin(), b.end(), b.begin(), 0.0);
    const int draws = 10000;
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < draws; ++r) {
        const double v = linear_process_sample(2, 0.5, spec, SeedSpec{77, static_cast<std::uint64_t>(r)})[0];
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / draws;
    const double var = sum_sq / draws - mean * mean;
    // Standard error of a Gaussian variance estimate is sigma^2 sqrt(2/N).
    CHECK(std::abs(var - target) <= 4.0 * target * std::sqrt(2.0 / draws));
}

TEST_CASE("default transforms change skewness but not mean or variance", "[generators]") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::GaussianSubordinated;
    spec.n = 40000;
    const auto x = generate(spec, SeedSpec{3, 0}).values;
    auto moments = [&](std::size_t from, std::size_t to) {
        const double m = static_cast<double>(to - from);
        double mean = 0.0;
        for (std::size_t i = from; i < to; ++i) mean += x[i];
        mean /= m;
        double v = 0.0, t = 0.0;
        for (std::size_t i = from; i < to; ++i) {
            v += (x[i] - mean) * (x[i] - mean);
            t += std::pow(x[i] - mean, 3);
        }
        return std::array<double, 3>{mean, v / m, t / m};
    };
    const auto pre = moments(0, 20000);
    const auto post = moments(20000, 40000);
    // Mean 0 with sd sqrt(2/20000); variance 2 with sd about sqrt(60/20000).
    CHECK(std::abs(pre[0] - post[0]) < 0.06);
    CHECK(std::abs(pre[1] - post[1]) < 0.25);
    CHECK(pre[2] > 4.0);
    CHECK(post[2] < -4.0);
}

TEST_CASE("null case spreads the estimate over the unit interval", "[generators][montecarlo]") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::Iid;
    spec.n = 500;
    const EstimatorConfig cfg{0.5, SeminormSpec::kolmogorov_smirnov()};
    std::vector<double> theta;
    for (std::uint64_t r = 0; r < 500; ++r) {
        theta.push_back(estimate_change_point(Series(generate(spec, SeedSpec{101, r}).values), cfg).theta_hat);
    }
    const double mean = std::accumulate(theta.begin(), theta.end(), 0.0) / 500.0;
    double var = 0.0;
    for (double t : theta) var += (t - mean) * (t - mean);
    const double sd = std::sqrt(var / 499.0);
    CHECK(sd > 0.15);
    CHECK(*std::min_element(theta.begin(), theta.end()) < 0.1);
    CHECK(*std::max_element(theta.begin(), theta.end()) > 0.9);
}

TEST_CASE("weakly dependent skewness change is located on average", "[generators][montecarlo]") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::GaussianSubordinated;
    spec.acf = AcfSpec{1.5};
    spec.n = 1000;
    const EstimatorConfig cfg{0.5, SeminormSpec::kolmogorov_smirnov()};
    double sum = 0.0;
    for (std::uint64_t r = 0; r < 500; ++r) {
        sum += estimate_change_point(Series(generate(spec, SeedSpec{202, r}).values), cfg).theta_hat;
    }
    CHECK(std::abs(sum / 500.0 - 0.5) <= 0.02);
}

TEST_CASE("generator settings validation", "[generators]") {
    GeneratorSpec spec;
    spec.theta = 1.0;
    CHECK_THROWS_AS(spec.validate(), InvalidInput);
    spec.theta = 0.5;
    spec.n = 1;
    CHECK_THROWS_AS(spec.validate(), InvalidInput);
    spec.n = 10;
    spec.acf = AcfSpec{-1.0};
    CHECK_THROWS_AS(spec.validate(), InvalidInput);
    CHECK_THROWS_AS(parse_generator_kind("arma"), InvalidInput);
    CHECK_THROWS_AS(MarginalLaw::parse("normal:0,-1"), InvalidInput);
    CHECK(MarginalLaw::parse("uniform:0,2").family == MarginalLaw::Family::Uniform);
}
