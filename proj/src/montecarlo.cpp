#include "cpd/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "cpd/error.hpp"
#include "cpd/io.hpp"

namespace cpd::mc {

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
        compensation_ += (sum_ - t) + x;
    } else {
        compensation_ += (x - t) + sum_;
    }
    sum_ = t;
}

std::string AlphaLevel::label() const { return alpha ? format_shortest(*alpha) : "iid"; }

void ExperimentConfig::validate() const {
    if (n_grid.empty()) throw InvalidInput("nGrid is empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 2) throw InvalidInput("nGrid values must be >= 2");
        if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw InvalidInput("nGrid must be strictly increasing");
    }
    if (alpha_grid.empty()) throw InvalidInput("alphaGrid is empty");
    for (const auto& level : alpha_grid) {
        if (level.alpha && !(*level.alpha > 0.0)) throw InvalidInput("alphaGrid values must be > 0");
    }
    if (replications < 1) throw InvalidInput("replications must be >= 1");
    EstimatorConfig{gamma, norm}.validate();
    GeneratorSpec probe = generator;
    probe.n = n_grid.front();
    probe.validate();
}

MaeSummary summarize(std::span<const double> values) {
    if (values.empty()) throw InvalidInput("no values to summarize");
    const double count = static_cast<double>(values.size());
    CompensatedSum sum;
    for (double v : values) sum.add(v);
    MaeSummary s;
    s.mean = sum.value() / count;
    if (values.size() == 1) {
        s.ci_low = s.ci_high = s.mean;
        return s;
    }
    CompensatedSum squares;
    for (double v : values) squares.add((v - s.mean) * (v - s.mean));
    const double sd = std::sqrt(squares.value() / (count - 1.0));
    const double half = 1.96 * sd / std::sqrt(count);
    s.ci_low = s.mean - half;
    s.ci_high = s.mean + half;
    return s;
}

unsigned default_worker_count() {
    if (const char* env = std::getenv("CPD_THREADS"); env != nullptr && *env != '\0') {
        unsigned value = 0;
        const char* end = env + std::char_traits<char>::length(env);
        auto [ptr, ec] = std::from_chars(env, end, value);
        if (ec == std::errc{} && ptr == end && value > 0) return value;
        throw InvalidInput("CPD_THREADS must be a positive integer");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body) {
    workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(count, 1)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::size_t failed_index = count;
    std::exception_ptr failure;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (i < failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t index) {
    return derive_seed(SeedSpec{master_seed, index}, 0x63656c6cULL);
}

std::vector<double> replicate_errors(const GeneratorSpec& spec, const EstimatorConfig& estimator,
                                     std::uint64_t seed, std::size_t replications, unsigned workers) {
    const double theta_n =
        static_cast<double>(change_index(spec.n, spec.theta)) / static_cast<double>(spec.n);
    std::vector<double> errors(replications);
    parallel_for(replications, workers, [&](std::size_t r) {
        const auto sample = generate(spec, SeedSpec{seed, r});
        const auto estimate = estimate_change_point(Series(sample.values), estimator);
        errors[r] = std::fabs(estimate.theta_hat - theta_n);
    });
    return errors;
}

std::vector<MaeRow> run_experiment(const ExperimentConfig& cfg, unsigned workers) {
    cfg.validate();
    const EstimatorConfig estimator{cfg.gamma, cfg.norm};
    std::vector<MaeRow> rows;
    std::size_t index = 0;
    for (const auto& level : cfg.alpha_grid) {
        for (std::size_t n : cfg.n_grid) {
            MaeRow row;
            row.n = n;
            row.alpha_label = level.label();
            row.norm_label = cfg.norm.label();
            row.gamma = cfg.gamma;
            row.replications = cfg.replications;

            GeneratorSpec spec = cfg.generator;
            spec.n = n;
            if (spec.kind == GeneratorKind::GaussianSubordinated) {
                spec.acf = level.alpha ? std::optional<AcfSpec>(AcfSpec{*level.alpha}) : std::nullopt;
            }
            try {
                const auto errors = replicate_errors(spec, estimator, cell_seed(cfg.master_seed, index),
                                                     cfg.replications, workers);
                const auto summary = summarize(errors);
                row.mae = summary.mean;
                row.ci_low = summary.ci_low;
                row.ci_high = summary.ci_high;
                row.n_times_mae = static_cast<double>(n) * row.mae;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            rows.push_back(std::move(row));
            ++index;
        }
    }
    return rows;
}

RateReport rate_check(std::span<const MaeRow> rows) {
    std::vector<const MaeRow*> ordered;
    for (const auto& row : rows) {
        if (row.ok()) ordered.push_back(&row);
    }
    if (ordered.size() < 2) throw InvalidInput("rate check needs at least two successful rows");
    std::sort(ordered.begin(), ordered.end(), [](const MaeRow* a, const MaeRow* b) { return a->n < b->n; });
    for (std::size_t i = 1; i < ordered.size(); ++i) {
        if (ordered[i]->n == ordered[i - 1]->n) throw InvalidInput("rate check rows repeat n");
    }

    const std::size_t m = ordered.size();
    const std::size_t half = (m + 1) / 2;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = m - half; i < m; ++i) {
        lo = std::min(lo, ordered[i]->n_times_mae);
        hi = std::max(hi, ordered[i]->n_times_mae);
    }
    RateReport report;
    report.max_min_ratio = hi / lo;
    report.monotone_tail = true;
    for (std::size_t i = m - std::min<std::size_t>(3, m) + 1; i < m; ++i) {
        if (ordered[i]->n_times_mae > ordered[i - 1]->n_times_mae) report.monotone_tail = false;
    }
    return report;
}

double DiagnosticFunction::operator()(double x) const {
    switch (kind) {
        case Kind::Identity:
            return x;
        case Kind::Square:
            return x * x;
        case Kind::Abs:
            return std::fabs(x);
        case Kind::IndicatorBelow:
            return x < threshold ? 1.0 : 0.0;
    }
    return x;
}

DiagnosticFunction DiagnosticFunction::parse(const std::string& text) {
    DiagnosticFunction f;
    if (text == "identity") {
        f.kind = Kind::Identity;
    } else if (text == "square") {
        f.kind = Kind::Square;
    } else if (text == "abs") {
        f.kind = Kind::Abs;
    } else if (text.rfind("indicator:", 0) == 0) {
        f.kind = Kind::IndicatorBelow;
        const std::string_view body = std::string_view(text).substr(10);
        auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), f.threshold);
        if (ec != std::errc{} || ptr != body.data() + body.size() || body.empty()) {
            throw InvalidInput("bad indicator threshold in '" + text + "'");
        }
    } else {
        throw InvalidInput("unknown function '" + text + "' (expected identity, square, abs, indicator:<t>)");
    }
    return f;
}

std::string DiagnosticFunction::name() const {
    switch (kind) {
        case Kind::Identity:
            return "identity";
        case Kind::Square:
            return "square";
        case Kind::Abs:
            return "abs";
        case Kind::IndicatorBelow:
            return "indicator:" + format_shortest(threshold);
    }
    return "?";
}

namespace {

std::size_t parse_size(std::string_view text, const std::string& context) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw InvalidInput("bad lag '" + std::string(text) + "' in '" + context + "'");
    }
    return value;
}

}  // namespace

std::vector<std::size_t> parse_lags(const std::string& text) {
    std::vector<std::size_t> lags;
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        const std::size_t first = parse_size(std::string_view(text).substr(0, dots), text);
        const std::size_t last = parse_size(std::string_view(text).substr(dots + 2), text);
        if (first < 1 || last < first) throw InvalidInput("lag range '" + text + "' is empty or starts below 1");
        for (std::size_t m = first; m <= last; ++m) lags.push_back(m);
        return lags;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        lags.push_back(parse_size(std::string_view(text).substr(start, comma - start), text));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    for (std::size_t j = 0; j < lags.size(); ++j) {
        if (lags[j] < 1) throw InvalidInput("lags must be >= 1 in '" + text + "'");
        if (j > 0 && lags[j] <= lags[j - 1]) throw InvalidInput("lags must be strictly increasing in '" + text + "'");
    }
    return lags;
}

DecayDiagnostic decay_diagnostic(std::span<const double> x, const DiagnosticFunction& f,
                                 std::span<const std::size_t> lags) {
    if (lags.empty()) throw InvalidInput("no lags given");
    for (std::size_t j = 0; j < lags.size(); ++j) {
        if (lags[j] < 1) throw InvalidInput("lags must be >= 1");
        if (j > 0 && lags[j] <= lags[j - 1]) throw InvalidInput("lags must be strictly increasing");
    }
    if (4 * lags.back() >= x.size()) throw InvalidInput("largest lag must be below n/4");

    std::vector<double> fx(x.size());
    std::transform(x.begin(), x.end(), fx.begin(), [&](double v) { return f(v); });

    DecayDiagnostic out;
    out.lags.assign(lags.begin(), lags.end());
    for (std::size_t m : lags) {
        const std::size_t pairs = fx.size() - m;
        double mean_a = 0.0;
        double mean_b = 0.0;
        for (std::size_t i = 0; i < pairs; ++i) {
            mean_a += fx[i];
            mean_b += fx[i + m];
        }
        mean_a /= static_cast<double>(pairs);
        mean_b /= static_cast<double>(pairs);
        double cov = 0.0;
        double var_a = 0.0;
        double var_b = 0.0;
        for (std::size_t i = 0; i < pairs; ++i) {
            const double da = fx[i] - mean_a;
            const double db = fx[i + m] - mean_b;
            cov += da * db;
            var_a += da * da;
            var_b += db * db;
        }
        out.corr_estimates.push_back(var_a > 0.0 && var_b > 0.0 ? cov / std::sqrt(var_a * var_b) : 0.0);
    }

    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t j = 0; j < lags.size(); ++j) {
        if (std::fabs(out.corr_estimates[j]) > 1e-3) {
            lx.push_back(std::log(static_cast<double>(lags[j])));
            ly.push_back(std::log(std::fabs(out.corr_estimates[j])));
        }
    }
    if (lx.size() < 2) return out;

    const double count = static_cast<double>(lx.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t j = 0; j < lx.size(); ++j) {
        mx += lx[j];
        my += ly[j];
    }
    mx /= count;
    my /= count;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t j = 0; j < lx.size(); ++j) {
        sxx += (lx[j] - mx) * (lx[j] - mx);
        sxy += (lx[j] - mx) * (ly[j] - my);
        syy += (ly[j] - my) * (ly[j] - my);
    }
    const double slope = sxy / sxx;
    out.fitted_rho = -slope;
    out.fit_quality = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    return out;
}

}  // namespace cpd::mc
