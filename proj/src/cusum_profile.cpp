#include "cpd/cusum_profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cpd/error.hpp"
#include "cpd/simd/kernels.hpp"

namespace cpd {

Series::Series(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw InvalidInput("a series needs at least two observations");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InvalidInput("observation " + std::to_string(i + 1) + " is not finite");
        }
    }
}

void EstimatorConfig::validate() const {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidInput("gamma must lie in [0, 1)");
    norm.validate();
}

double split_weight(std::size_t k, std::size_t n, double gamma) {
    const double kk = static_cast<double>(k);
    const double nn = static_cast<double>(n);
    return std::pow(kk * static_cast<double>(n - k) / (nn * nn), 1.0 - gamma);
}

std::size_t first_argmax(std::span<const double> stats) {
    if (stats.empty()) throw InvalidInput("empty profile");
    std::size_t best = 0;
    for (std::size_t j = 1; j < stats.size(); ++j) {
        if (stats[j] > stats[best]) best = j;
    }
    return best + 1;
}

namespace {

// Indicator family {1(. < X_i)}. Thresholds are kept in ascending order with
// multiplicity. For split k and threshold t define
//   L(t) = #{i <= k : X_i < t},  T(t) = #{i : X_i < t}.
// Then nu(1(. < t)) = w_k * A / (k (n - k)) with the integer
//   A = L (n - k) - (T - L) k = n L - k T,
// so norms are formed from exact integers before the single final rounding.
class IndicatorScan {
public:
    IndicatorScan(std::span<const double> x, const SeminormSpec& norm)
        : n_(x.size()), norm_(norm), sorted_(x.begin(), x.end()), below_(n_), left_(n_, 0.0),
          entry_(n_) {
        std::sort(sorted_.begin(), sorted_.end());
        for (std::size_t j = 0; j < n_; ++j) {
            below_[j] = static_cast<double>(
                std::lower_bound(sorted_.begin(), sorted_.end(), sorted_[j]) - sorted_.begin());
        }
        // Moving X_i into the left block raises L for every threshold above X_i,
        // a suffix of the sorted order.
        for (std::size_t i = 0; i < n_; ++i) {
            entry_[i] = static_cast<std::size_t>(
                std::upper_bound(sorted_.begin(), sorted_.end(), x[i]) - sorted_.begin());
        }
    }

    void add_to_left(std::size_t i) {
        simd::active_kernels().increment_suffix(left_.data(), entry_[i], n_);
    }

    void fill_left_block(std::size_t k) {
        std::fill(left_.begin(), left_.end(), 0.0);
        for (std::size_t i = 0; i < k; ++i) add_to_left(i);
    }

    double value(std::size_t k, double gamma) const {
        const auto& kern = simd::active_kernels();
        const double a = static_cast<double>(n_);
        const double b = static_cast<double>(k);
        const double denom = static_cast<double>(k) * static_cast<double>(n_ - k);
        const double w = split_weight(k, n_, gamma);
        if (norm_.kind == NormKind::KolmogorovSmirnov) {
            return w * (kern.max_abs_affine(left_.data(), below_.data(), n_, a, b) / denom);
        }
        double sum = 0.0;
        if (norm_.p == 1.0) {
            sum = kern.sum_abs_affine(left_.data(), below_.data(), n_, a, b);
        } else if (norm_.p == 2.0) {
            sum = kern.sum_sq_affine(left_.data(), below_.data(), n_, a, b);
        } else {
            for (std::size_t j = 0; j < n_; ++j) {
                sum += std::pow(std::fabs(a * left_[j] - b * below_[j]), norm_.p);
            }
        }
        return w * (std::pow(sum / static_cast<double>(n_), 1.0 / norm_.p) / denom);
    }

private:
    std::size_t n_;
    const SeminormSpec& norm_;
    std::vector<double> sorted_;
    std::vector<double> below_;   // T per sorted threshold
    std::vector<double> left_;    // L per sorted threshold
    std::vector<std::size_t> entry_;
};

// Truncated moments f_p(x) = x^p 1(|x| < M). Column values are shifted by
// their sample minimum before accumulation; the shift cancels in the mean
// difference, makes constant columns vanish exactly, and is invariant under
// reversal of the series.
class MomentScan {
public:
    MomentScan(std::span<const double> x, const SeminormSpec& norm)
        : n_(x.size()), norm_(norm), powers_(norm.moment_weights.size()) {
        for (std::size_t p = 0; p < powers_; ++p) {
            std::vector<double> column(n_);
            for (std::size_t i = 0; i < n_; ++i) {
                column[i] = truncated_power(x[i], static_cast<int>(p + 1), norm.truncation);
            }
            const double shift = *std::min_element(column.begin(), column.end());
            for (double& v : column) v -= shift;

            std::vector<double> prefix(n_ + 1, 0.0);
            for (std::size_t i = 0; i < n_; ++i) prefix[i + 1] = prefix[i] + column[i];
            std::vector<double> suffix(n_ + 1, 0.0);  // suffix[k] = sum over i >= k, from the right
            for (std::size_t i = n_; i-- > 0;) suffix[i] = suffix[i + 1] + column[i];
            prefix_.push_back(std::move(prefix));
            suffix_.push_back(std::move(suffix));
        }
    }

    double value(std::size_t k, double gamma) const {
        const double w = split_weight(k, n_, gamma);
        const double kk = static_cast<double>(k);
        const double rest = static_cast<double>(n_ - k);
        double total = 0.0;
        for (std::size_t p = 0; p < powers_; ++p) {
            const double diff = w * (prefix_[p][k] / kk - suffix_[p][k] / rest);
            total += norm_.moment_weights[p] * std::fabs(diff);
        }
        return total;
    }

private:
    std::size_t n_;
    const SeminormSpec& norm_;
    std::size_t powers_;
    std::vector<std::vector<double>> prefix_;
    std::vector<std::vector<double>> suffix_;
};

}  // namespace

StatProfile compute_profile(const Series& x, const EstimatorConfig& cfg) {
    cfg.validate();
    const std::size_t n = x.size();
    StatProfile profile;
    profile.stats.resize(n - 1);
    if (cfg.norm.is_indicator()) {
        IndicatorScan scan(x.values(), cfg.norm);
        for (std::size_t k = 1; k < n; ++k) {
            scan.add_to_left(k - 1);
            profile.stats[k - 1] = scan.value(k, cfg.gamma);
        }
    } else {
        MomentScan scan(x.values(), cfg.norm);
        for (std::size_t k = 1; k < n; ++k) profile.stats[k - 1] = scan.value(k, cfg.gamma);
    }
    return profile;
}

ChangePointEstimate estimate_change_point(const Series& x, const EstimatorConfig& cfg) {
    ChangePointEstimate estimate;
    estimate.profile = compute_profile(x, cfg);
    estimate.k_hat = first_argmax(estimate.profile.stats);
    estimate.theta_hat = static_cast<double>(estimate.k_hat) / static_cast<double>(x.size());
    return estimate;
}

double profile_at(const Series& x, const EstimatorConfig& cfg, std::size_t k) {
    cfg.validate();
    if (k < 1 || k >= x.size()) {
        throw InvalidInput("split k = " + std::to_string(k) + " outside [1, " +
                           std::to_string(x.size() - 1) + "]");
    }
    if (cfg.norm.is_indicator()) {
        IndicatorScan scan(x.values(), cfg.norm);
        scan.fill_left_block(k);
        return scan.value(k, cfg.gamma);
    }
    return MomentScan(x.values(), cfg.norm).value(k, cfg.gamma);
}

}  // namespace cpd
