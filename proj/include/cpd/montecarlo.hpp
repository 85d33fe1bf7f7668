#pragma once
// Replicated estimation experiments, the n * MAE rate check and the
// correlation-decay diagnostic.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpd/cusum_profile.hpp"
#include "cpd/generators.hpp"

namespace cpd::mc {

/// Neumaier compensated sum; order of add() calls fixes the result.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/// Dependence level of one grid column: an acf exponent, or none for iid Y.
struct AlphaLevel {
    std::optional<double> alpha;

    std::string label() const;
};

struct ExperimentConfig {
    GeneratorSpec generator;  // n is overridden per cell, acf per alpha level
    std::vector<std::size_t> n_grid{500, 1000, 2000};
    std::vector<AlphaLevel> alpha_grid{AlphaLevel{}};
    SeminormSpec norm;
    double gamma = 0.5;
    std::size_t replications = 500;
    std::uint64_t master_seed = 0;

    void validate() const;
};

struct MaeRow {
    std::size_t n = 0;
    std::string alpha_label;
    std::string norm_label;
    double gamma = 0.0;
    std::size_t replications = 0;
    double mae = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double n_times_mae = 0.0;
    std::optional<std::string> error;  // set when the cell failed

    bool ok() const { return !error.has_value(); }
};

struct MaeSummary {
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// Mean of `values` with a normal-approximation 95% interval
/// mean +- 1.96 s / sqrt(R); collapses to the mean when R = 1.
MaeSummary summarize(std::span<const double> values);

/// Worker count from CPD_THREADS, else hardware concurrency (at least 1).
unsigned default_worker_count();

/// Runs body(i) for i in [0, count) on `workers` threads. Exceptions escape
/// from the first failing index.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

/// Per-replication absolute errors |theta_hat - floor(n theta)/n| for one cell.
std::vector<double> replicate_errors(const GeneratorSpec& spec, const EstimatorConfig& estimator,
                                     std::uint64_t cell_seed, std::size_t replications, unsigned workers);

/// Grid cells in order: alpha levels outer, n inner. A cell whose generator
/// or estimator throws is returned with `error` set; other cells still run.
std::vector<MaeRow> run_experiment(const ExperimentConfig& cfg, unsigned workers);

/// Seed of grid cell `index`, derived from the experiment master seed.
std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t index);

struct RateReport {
    double max_min_ratio = 0.0;
    bool monotone_tail = false;
};

/// Rows of a single (alpha, norm) family, any order. max_min_ratio covers the
/// largest ceil(m/2) grid points; monotone_tail asks whether n * MAE is
/// non-increasing over the last three.
RateReport rate_check(std::span<const MaeRow> rows);

struct DiagnosticFunction {
    enum class Kind { Identity, Square, Abs, IndicatorBelow };
    Kind kind = Kind::Identity;
    double threshold = 0.0;

    double operator()(double x) const;
    /// "identity", "square", "abs", "indicator:<t>".
    static DiagnosticFunction parse(const std::string& text);
    std::string name() const;
};

struct DecayDiagnostic {
    std::vector<std::size_t> lags;
    std::vector<double> corr_estimates;
    /// Negative log-log slope; +infinity when fewer than two lags have
    /// |corr| > 1e-3 (decay faster than any power).
    double fitted_rho = std::numeric_limits<double>::infinity();
    double fit_quality = 0.0;  // R^2 of the log-log fit

    bool fast_decay() const { return fitted_rho == std::numeric_limits<double>::infinity(); }
};

/// Parses "a..b" (inclusive) or a comma list.
std::vector<std::size_t> parse_lags(const std::string& text);

DecayDiagnostic decay_diagnostic(std::span<const double> x, const DiagnosticFunction& f,
                                 std::span<const std::size_t> lags);

}  // namespace cpd::mc
