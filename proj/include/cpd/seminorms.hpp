#pragma once
// Seminorms on signed measures. A measure is passed in by its action on a
// function family: for the indicator family {1(. < X_i)} that is the vector
// d_i = nu(1(. < X_i)); for truncated moments it is Delta_p = nu(x^p 1(|x| < M)).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cpd {

enum class NormKind { KolmogorovSmirnov, LpEmpirical, WeightedMoments };

struct SeminormSpec {
    NormKind kind = NormKind::KolmogorovSmirnov;
    double p = 1.0;                      // LpEmpirical
    std::vector<double> moment_weights;  // WeightedMoments, weight of x^1, x^2, ...
    double truncation = 10.0;            // WeightedMoments

    static SeminormSpec kolmogorov_smirnov();
    static SeminormSpec lp(double p);
    /// Empty weights select the default d_p = 2^-p for p = 1..4.
    static SeminormSpec weighted_moments(std::vector<double> weights = {}, double truncation = 10.0);

    bool is_indicator() const { return kind != NormKind::WeightedMoments; }

    /// Throws InvalidInput when an invariant of the chosen kind is broken.
    void validate() const;

    /// Short tag used in result files: "ks", "l1", "l2", "l2.5", "moments".
    std::string label() const;
};

/// Parses "ks", "l1", "l2", "lp:<p>", "moments" or "moments:<w1>,<w2>,...[@M]".
SeminormSpec parse_seminorm(const std::string& text);

/// Sup-norm or empirical L^p norm of indicator evaluations d.
double evaluate_indicator_norm(const SeminormSpec& spec, std::span<const double> d);

/// sum_p weight_p * |Delta_p|.
double evaluate_moment_norm(const SeminormSpec& spec, std::span<const double> moment_diffs);

/// x^power if |x| < truncation, else 0.
double truncated_power(double x, int power, double truncation);

}  // namespace cpd
