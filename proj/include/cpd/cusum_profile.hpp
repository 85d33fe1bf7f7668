#pragma once
// Weighted two-sample statistic profile over all split points and the
// smallest-argmax change-point estimate built from it.
//
// For a split k (1 <= k < n) the left block is X_1..X_k and the right block
// X_{k+1}..X_n. The profile entry is N(D_k) with
//   D_k = [k/n (1 - k/n)]^(1-gamma) * (empirical law of left - empirical law of right).

#include <cstddef>
#include <span>
#include <vector>

#include "cpd/seminorms.hpp"

namespace cpd {

/// Validated estimator input: at least two finite observations.
class Series {
public:
    explicit Series(std::vector<double> values);

    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<double> values_;
};

struct EstimatorConfig {
    double gamma = 0.5;
    SeminormSpec norm;

    void validate() const;
};

struct StatProfile {
    std::vector<double> stats;  // stats[k - 1] = N(D_k)

    std::size_t series_length() const { return stats.size() + 1; }
    /// Entry for split k, 1-based.
    double at(std::size_t k) const { return stats.at(k - 1); }
};

struct ChangePointEstimate {
    std::size_t k_hat = 0;
    double theta_hat = 0.0;
    StatProfile profile;
};

/// [k(n-k)/n^2]^(1-gamma). Symmetric under k -> n-k bit for bit.
double split_weight(std::size_t k, std::size_t n, double gamma);

StatProfile compute_profile(const Series& x, const EstimatorConfig& cfg);

/// Smallest k whose entry is maximal under exact comparison.
ChangePointEstimate estimate_change_point(const Series& x, const EstimatorConfig& cfg);

/// Single profile entry; equals compute_profile(x, cfg).at(k) exactly.
double profile_at(const Series& x, const EstimatorConfig& cfg, std::size_t k);

/// 1-based index of the first strict maximum.
std::size_t first_argmax(std::span<const double> stats);

}  // namespace cpd
