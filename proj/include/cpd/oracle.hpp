#pragma once
// Naive reference evaluations used as ground truth in tests. Nothing here
// calls into the profile scan or the Durbin-Levinson sampler.

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "cpd/cusum_profile.hpp"
#include "cpd/generators.hpp"

namespace cpd::oracle {

/// weight * (empirical law of `left` - empirical law of `right`).
struct EmpiricalSignedMeasure {
    std::vector<double> left;
    std::vector<double> right;
    double weight = 1.0;

    /// Blocks X_1..X_k and X_{k+1}..X_n with weight [k/n (1 - k/n)]^(1-gamma).
    static EmpiricalSignedMeasure from_split(std::span<const double> x, std::size_t k, double gamma);
};

struct IndicatorBelow {
    double threshold;  // f(x) = 1(x < threshold)
};

struct TruncatedPower {
    int power;
    double truncation;  // f(x) = x^power 1(|x| < truncation)
};

using TestFunction = std::variant<IndicatorBelow, TruncatedPower>;

/// nu(f) by direct summation over both blocks.
double measure_apply(const EmpiricalSignedMeasure& m, const TestFunction& f);

/// Integer A with nu(1(. < t)) = weight * A / (|left| |right|), from direct counts.
std::int64_t indicator_count_difference(const EmpiricalSignedMeasure& m, double threshold);

inline constexpr std::size_t kBruteForceMaxLength = 5000;
inline constexpr std::size_t kCholeskyMaxLength = 2048;

/// Profile from the raw definition; n <= 5000.
std::vector<double> brute_force_profile(std::span<const double> x, const EstimatorConfig& cfg);

/// Smallest maximising split (1-based) of a brute-force profile.
std::size_t brute_force_argmax(std::span<const double> profile);

/// L * innovations with L the Cholesky factor of the full n x n Toeplitz
/// covariance; n <= 2048.
std::vector<double> cholesky_sample(const AcfSpec& acf, std::span<const double> innovations);

}  // namespace cpd::oracle
