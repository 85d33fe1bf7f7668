#pragma once
// Synthetic sequences with a single change-point.
//
//  * GaussianSubordinated: a stationary Gaussian sequence Y (iid, or with
//    autocovariance r(m) = (1 + m^2)^(-alpha/4) drawn by Durbin-Levinson),
//    then X_i = G1(Y_i) for i <= floor(n theta) and X_i = G2(Y_i) after.
//  * LinearProcess: two-sided truncated filter of iid normal innovations with
//    a second coefficient set / innovation stream after the change, followed
//    by the same transform pair.
//  * Iid: independent draws from a pre-change and a post-change law.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpd/random.hpp"

namespace cpd {

struct AcfSpec {
    double alpha = 1.0;

    double at(std::size_t lag) const;
    void validate() const;
};

/// (1 + m^2)^(-alpha/4).
double polynomial_acf(double alpha, std::size_t lag);

enum class Transform { Identity, SquareMinusOne, OneMinusSquare, Negate };

struct TransformPair {
    Transform pre = Transform::SquareMinusOne;
    Transform post = Transform::OneMinusSquare;
};

Transform parse_transform(const std::string& name);
std::string transform_name(Transform t);
double apply_transform(Transform t, double y);

struct MarginalLaw {
    enum class Family { Normal, Uniform, Exponential };
    Family family = Family::Normal;
    double first = 0.0;   // normal: mean, uniform: lower, exponential: rate
    double second = 1.0;  // normal: variance, uniform: upper

    double draw(RandomStream& rng) const;
    void validate() const;
    /// "normal:0,1", "uniform:-1,1", "exponential:2".
    static MarginalLaw parse(const std::string& text);
    std::string describe() const;
};

struct LinearProcessSpec {
    double beta = 1.0;
    std::size_t lag_truncation = 50;
    bool switch_stream = true;  // independent innovations after the change
    bool flip_signs = true;     // post-change off-center coefficients negated

    void validate() const;
};

enum class GeneratorKind { Iid, GaussianSubordinated, LinearProcess };

std::string generator_kind_name(GeneratorKind kind);
GeneratorKind parse_generator_kind(const std::string& name);

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::GaussianSubordinated;
    double theta = 0.5;
    std::size_t n = 1000;
    std::optional<AcfSpec> acf;  // absent: iid Gaussian Y
    TransformPair transforms;
    LinearProcessSpec linear;
    MarginalLaw pre_law;
    MarginalLaw post_law;

    void validate() const;
};

struct GeneratedSeries {
    std::vector<double> values;
    std::size_t true_change_index = 0;
};

/// floor(n theta): the last index (1-based) governed by the pre-change law.
std::size_t change_index(std::size_t n, double theta);

/// Maps iid standard normal innovations to a Gaussian sequence with
/// covariance r(|i-j|) through the innovations (Durbin-Levinson) recursion.
/// The result equals L * innovations for the Cholesky factor L of the
/// Toeplitz covariance. Throws CovarianceNotPD if an innovation variance
/// drops below 1e-12.
std::vector<double> durbin_levinson_filter(const AcfSpec& acf, std::span<const double> innovations);

std::vector<double> durbin_levinson_sample(const AcfSpec& acf, std::size_t n, const SeedSpec& seed);

/// n iid standard normals from stream `stream_id`.
std::vector<double> normal_innovations(std::size_t n, const SeedSpec& seed, std::uint64_t stream_id);

std::vector<double> apply_change(std::span<const double> y, double theta, const TransformPair& transforms);

/// Coefficients b_{-L..L} (index k + L): b_0 = 1, b_k = |k|^-beta, or -|k|^-beta
/// off-center when `negated`.
std::vector<double> linear_process_coefficients(double beta, std::size_t lag_truncation, bool negated);

/// X_i = sum_{|k| <= L} b_k eps_{i-k}. Each stream carries n + 2L innovations
/// (L of padding on each side).
std::vector<double> linear_process_sample(std::size_t n, double theta, const LinearProcessSpec& spec,
                                          const SeedSpec& seed);

/// Deterministic in (spec, seed).
GeneratedSeries generate(const GeneratorSpec& spec, const SeedSpec& seed);

}  // namespace cpd
