#include "cpd/oracle.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>

#include "cpd/error.hpp"

namespace cpd::oracle {

EmpiricalSignedMeasure EmpiricalSignedMeasure::from_split(std::span<const double> x, std::size_t k,
                                                          double gamma) {
    const std::size_t n = x.size();
    if (k < 1 || k >= n) throw InvalidInput("split outside [1, n-1]");
    EmpiricalSignedMeasure m;
    m.left.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k));
    m.right.assign(x.begin() + static_cast<std::ptrdiff_t>(k), x.end());
    m.weight = std::pow(static_cast<double>(k) * static_cast<double>(n - k) /
                            (static_cast<double>(n) * static_cast<double>(n)),
                        1.0 - gamma);
    return m;
}

namespace {

double evaluate(const TestFunction& f, double x) {
    if (const auto* ind = std::get_if<IndicatorBelow>(&f)) return x < ind->threshold ? 1.0 : 0.0;
    const auto& tp = std::get<TruncatedPower>(f);
    return std::fabs(x) < tp.truncation ? std::pow(x, tp.power) : 0.0;
}

void check_blocks(const EmpiricalSignedMeasure& m) {
    if (m.left.empty() || m.right.empty()) throw InvalidInput("both blocks must be nonempty");
}

}  // namespace

std::int64_t indicator_count_difference(const EmpiricalSignedMeasure& m, double threshold) {
    check_blocks(m);
    std::int64_t below_left = 0;
    for (double v : m.left) below_left += v < threshold ? 1 : 0;
    std::int64_t below_right = 0;
    for (double v : m.right) below_right += v < threshold ? 1 : 0;
    const auto nl = static_cast<std::int64_t>(m.left.size());
    const auto nr = static_cast<std::int64_t>(m.right.size());
    return below_left * nr - below_right * nl;
}

double measure_apply(const EmpiricalSignedMeasure& m, const TestFunction& f) {
    check_blocks(m);
    const double nl = static_cast<double>(m.left.size());
    const double nr = static_cast<double>(m.right.size());
    if (const auto* ind = std::get_if<IndicatorBelow>(&f)) {
        // Exact rational (count_left/nl - count_right/nr) before one rounding.
        return m.weight * (static_cast<double>(indicator_count_difference(m, ind->threshold)) / (nl * nr));
    }
    // Moments: shift by the smallest f-value over both blocks, which cancels
    // in the difference of means.
    double shift = evaluate(f, m.left.front());
    for (double v : m.left) shift = std::min(shift, evaluate(f, v));
    for (double v : m.right) shift = std::min(shift, evaluate(f, v));
    double sum_left = 0.0;
    for (double v : m.left) sum_left += evaluate(f, v) - shift;
    double sum_right = 0.0;
    for (double v : m.right) sum_right += evaluate(f, v) - shift;
    return m.weight * (sum_left / nl - sum_right / nr);
}

std::vector<double> brute_force_profile(std::span<const double> x, const EstimatorConfig& cfg) {
    const std::size_t n = x.size();
    if (n < 2) throw InvalidInput("need at least two observations");
    if (n > kBruteForceMaxLength) throw InvalidInput("brute-force profile limited to n <= 5000");
    cfg.validate();

    std::vector<double> profile(n - 1);
    for (std::size_t k = 1; k < n; ++k) {
        const auto m = EmpiricalSignedMeasure::from_split(x, k, cfg.gamma);
        const double denom = static_cast<double>(k) * static_cast<double>(n - k);
        double value = 0.0;
        switch (cfg.norm.kind) {
            case NormKind::KolmogorovSmirnov: {
                for (std::size_t i = 0; i < n; ++i) {
                    value = std::max(value, std::fabs(measure_apply(m, IndicatorBelow{x[i]})));
                }
                break;
            }
            case NormKind::LpEmpirical: {
                // Powers of the exact integer numerators, then a single scaling.
                double sum = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const auto a = indicator_count_difference(m, x[i]);
                    sum += std::pow(std::fabs(static_cast<double>(a)), cfg.norm.p);
                }
                value = m.weight * (std::pow(sum / static_cast<double>(n), 1.0 / cfg.norm.p) / denom);
                break;
            }
            case NormKind::WeightedMoments: {
                for (std::size_t p = 0; p < cfg.norm.moment_weights.size(); ++p) {
                    const double diff =
                        measure_apply(m, TruncatedPower{static_cast<int>(p + 1), cfg.norm.truncation});
                    value += cfg.norm.moment_weights[p] * std::fabs(diff);
                }
                break;
            }
        }
        profile[k - 1] = value;
    }
    return profile;
}

std::size_t brute_force_argmax(std::span<const double> profile) {
    if (profile.empty()) throw InvalidInput("empty profile");
    double best = profile[0];
    std::size_t arg = 1;
    for (std::size_t k = 2; k <= profile.size(); ++k) {
        if (profile[k - 1] > best) {
            best = profile[k - 1];
            arg = k;
        }
    }
    return arg;
}

std::vector<double> cholesky_sample(const AcfSpec& acf, std::span<const double> innovations) {
    const auto n = static_cast<Eigen::Index>(innovations.size());
    if (innovations.empty()) return {};
    if (innovations.size() > kCholeskyMaxLength) throw InvalidInput("Cholesky oracle limited to n <= 2048");
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            cov(i, j) = std::pow(1.0 + static_cast<double>((i - j) * (i - j)), -acf.alpha / 4.0);
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw CovarianceNotPD("Toeplitz covariance is not positive definite");
    const Eigen::Map<const Eigen::VectorXd> eps(innovations.data(), n);
    const Eigen::VectorXd y = llt.matrixL() * eps;
    return std::vector<double>(y.data(), y.data() + n);
}

}  // namespace cpd::oracle
