#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <cstdlib>
#include <iostream>

#include "cpd/cli.hpp"
#include "cpd/cusum_profile.hpp"
#include "cpd/error.hpp"
#include "cpd/io.hpp"

namespace cpd::cli {

using nlohmann::json;

namespace {

// Manifests are byte-reproducible: the timestamp comes from SOURCE_DATE_EPOCH
// and is null when that variable is unset.
json manifest_timestamp() {
    const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
    if (epoch == nullptr || *epoch == '\0') return nullptr;
    char* end = nullptr;
    const long long seconds = std::strtoll(epoch, &end, 10);
    if (*end != '\0') return nullptr;
    const std::time_t t = static_cast<std::time_t>(seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf);
}

std::filesystem::path sidecar(const std::filesystem::path& output, const std::string& suffix) {
    return std::filesystem::path(output.string() + suffix);
}

void write_json(const std::filesystem::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

// Maps exceptions onto the exit-code contract with a one-line diagnostic.
template <typename Body>
int guarded(const char* command, std::ostream& err, Body body) {
    try {
        return body();
    } catch (const CovarianceNotPD& e) {
        err << command << ": numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const InvalidInput& e) {
        err << command << ": error: " << e.what() << '\n';
        return kUserInput;
    } catch (const std::exception& e) {
        err << command << ": internal error: " << e.what() << '\n';
        return kInternal;
    }
}

}  // namespace

json run_manifest(const std::string& command, const json& config, std::uint64_t master_seed) {
    return {{"command", command},
            {"configDigest", fnv1a_hex(config.dump())},
            {"masterSeed", master_seed},
            {"toolVersion", kToolVersion},
            {"timestamp", manifest_timestamp()}};
}

int cmd_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded("estimate", err, [&] {
        std::vector<double> values;
        try {
            values = read_series_csv(opts.input);
        } catch (const ParseError& e) {
            throw InvalidInput(opts.input.string() + ": " + e.what());
        }
        const Series series(std::move(values));
        EstimatorConfig cfg{opts.gamma, parse_seminorm(opts.norm)};
        cfg.validate();
        const auto estimate = estimate_change_point(series, cfg);

        const auto& stats = estimate.profile.stats;
        const bool flat = std::all_of(stats.begin(), stats.end(), [&](double s) { return s == stats.front(); });
        if (flat) err << "warning: flat profile; estimate is the tie-break default\n";

        out << "theta_hat=" << format_fixed(estimate.theta_hat, 6) << '\n';
        out << "k_hat=" << estimate.k_hat << '\n';

        const json config = {{"norm", seminorm_to_json(cfg.norm)}, {"gamma", cfg.gamma}};
        if (opts.output) {
            json result = {{"n", series.size()},
                           {"kHat", estimate.k_hat},
                           {"thetaHat", estimate.theta_hat},
                           {"maxStat", stats[estimate.k_hat - 1]},
                           {"norm", cfg.norm.label()},
                           {"gamma", cfg.gamma},
                           {"flatProfile", flat}};
            write_json(*opts.output, result);
            write_json(sidecar(*opts.output, ".manifest.json"), run_manifest("estimate", config, 0));
        }
        if (opts.profile) {
            write_profile_csv(*opts.profile, stats);
            write_json(sidecar(*opts.profile, ".manifest.json"), run_manifest("estimate", config, 0));
        }
        return static_cast<int>(kOk);
    });
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded("simulate", err, [&] {
        opts.spec.validate();
        const auto series = generate(opts.spec, opts.seed);
        write_series_csv(opts.output, series.values);

        const json spec = generator_to_json(opts.spec);
        json manifest = run_manifest("simulate", spec, opts.seed.master_seed);
        manifest["spec"] = spec;
        manifest["replicationId"] = opts.seed.replication_id;
        manifest["trueChangeIndex"] = series.true_change_index;
        write_json(sidecar(opts.output, ".manifest.json"), manifest);
        out << "wrote " << series.values.size() << " observations to " << opts.output.string()
            << " (change after index " << series.true_change_index << ")\n";
        return static_cast<int>(kOk);
    });
}

int cmd_experiment(const ExperimentOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded("experiment", err, [&] {
        json raw;
        try {
            raw = json::parse(read_text_file(opts.config));
        } catch (const json::parse_error& e) {
            throw InvalidInput(opts.config.string() + ": " + e.what());
        }
        const auto cfg = experiment_from_json(raw);
        const unsigned workers = opts.workers ? *opts.workers : mc::default_worker_count();
        const auto rows = mc::run_experiment(cfg, workers);

        write_text_file(opts.output, results_csv(rows));

        json rate = json::object();
        for (const auto& level : cfg.alpha_grid) {
            std::vector<mc::MaeRow> family;
            for (const auto& row : rows) {
                if (row.alpha_label == level.label()) family.push_back(row);
            }
            try {
                const auto report = mc::rate_check(family);
                rate[level.label()] = {{"maxMinRatio", report.max_min_ratio},
                                       {"monotoneTailFlag", report.monotone_tail}};
            } catch (const InvalidInput& e) {
                rate[level.label()] = {{"error", e.what()}};
            }
        }
        write_json(sidecar(opts.output, ".rate.json"), rate);
        const json canonical = experiment_to_json(cfg);
        json manifest = run_manifest("experiment", canonical, cfg.master_seed);
        manifest["config"] = canonical;
        write_json(sidecar(opts.output, ".manifest.json"), manifest);

        std::size_t ok = 0;
        for (const auto& row : rows) {
            if (row.ok()) {
                ++ok;
            } else {
                err << "experiment: cell n=" << row.n << " alpha=" << row.alpha_label << " failed: " << *row.error
                    << '\n';
            }
        }
        out << "wrote " << rows.size() << " rows (" << ok << " ok) to " << opts.output.string() << '\n';
        if (ok > 0) return static_cast<int>(kOk);
        return static_cast<int>(rows.front().error->find("positive definite") != std::string::npos ? kNumerical
                                                                                                  : kUserInput);
    });
}

int cmd_diagnose(const DiagnoseOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded("diagnose", err, [&] {
        const auto f = mc::DiagnosticFunction::parse(opts.function);
        const auto lags = mc::parse_lags(opts.lags);
        std::vector<double> values;
        try {
            values = read_series_csv(opts.input);
        } catch (const ParseError& e) {
            throw InvalidInput(opts.input.string() + ": " + e.what());
        }
        const Series series(std::move(values));
        const auto diag = mc::decay_diagnostic(series.values(), f, lags);

        out << "m,corr\n";
        std::string csv = "m,corr\n";
        for (std::size_t j = 0; j < diag.lags.size(); ++j) {
            out << diag.lags[j] << ',' << format_fixed(diag.corr_estimates[j], 6) << '\n';
            csv += std::to_string(diag.lags[j]) + ',' + format_shortest(diag.corr_estimates[j]) + '\n';
        }
        if (diag.fast_decay()) {
            out << "fitted_rho=inf (fewer than two lags with |corr| > 1e-3: faster than algebraic decay)\n";
        } else {
            out << "fitted_rho=" << format_fixed(diag.fitted_rho, 6) << '\n';
        }
        out << "fit_quality=" << format_fixed(diag.fit_quality, 6) << '\n';
        if (opts.output) {
            write_text_file(*opts.output, csv);
            const json config = {{"function", f.name()}, {"lags", diag.lags}};
            write_json(sidecar(*opts.output, ".manifest.json"), run_manifest("diagnose", config, 0));
        }
        return static_cast<int>(kOk);
    });
}

int run(int argc, char** argv) {
    CLI::App app{"Nonparametric change-point estimation for dependent sequences"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    EstimateOptions est;
    auto* estimate = app.add_subcommand("estimate", "Estimate the change-point of a series stored as CSV");
    estimate->add_option("input", est.input, "Input CSV (one value per line, optional header/index)")->required();
    estimate->add_option("--norm", est.norm, "Seminorm: ks, l<p>, lp:<p>, moments, moments:<w1>,...[@M]");
    estimate->add_option("--gamma", est.gamma, "Weight exponent gamma in [0, 1)");
    estimate->add_option("-o,--output", est.output, "Result file (JSON)");
    estimate->add_option("--emit-profile", est.profile, "Write the full k,stat profile CSV here");

    SimulateOptions sim;
    std::string kind = "gaussian";
    std::optional<double> alpha;
    std::optional<std::string> config_path;
    std::string g1 = "square-minus-one";
    std::string g2 = "one-minus-square";
    std::string pre = "normal:0,1";
    std::string post = "normal:0,1";
    bool keep_stream = false;
    bool keep_signs = false;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic series with one change-point");
    simulate->add_option("--config", config_path, "Generator spec as JSON (flags below are ignored)");
    simulate->add_option("--kind", kind, "iid, gaussian or linear");
    simulate->add_option("--alpha", alpha, "ACF exponent; omit for iid Gaussian Y");
    simulate->add_option("--theta", sim.spec.theta, "Change location in (0, 1)");
    simulate->add_option("--n", sim.spec.n, "Series length");
    simulate->add_option("--seed", sim.seed.master_seed, "Master seed");
    simulate->add_option("--replication", sim.seed.replication_id, "Replication id");
    simulate->add_option("--g1", g1, "Pre-change transform");
    simulate->add_option("--g2", g2, "Post-change transform");
    simulate->add_option("--pre", pre, "Pre-change law (iid kind)");
    simulate->add_option("--post", post, "Post-change law (iid kind)");
    simulate->add_option("--beta", sim.spec.linear.beta, "Coefficient decay (linear kind)");
    simulate->add_option("--lag-truncation", sim.spec.linear.lag_truncation, "Filter half-width L (linear kind)");
    simulate->add_flag("--same-stream", keep_stream, "Linear kind: keep one innovation stream");
    simulate->add_flag("--same-signs", keep_signs, "Linear kind: keep coefficient signs after the change");
    simulate->add_option("-o,--output", sim.output, "Output CSV (i,x)")->required();

    ExperimentOptions exp;
    auto* experiment = app.add_subcommand("experiment", "Run a Monte-Carlo grid and write MAE rows");
    experiment->add_option("config", exp.config, "Experiment JSON")->required();
    experiment->add_option("-o,--output", exp.output, "Results CSV")->required();
    experiment->add_option("--threads", exp.workers, "Worker threads (default: CPD_THREADS or all cores)");

    DiagnoseOptions diag;
    auto* diagnose = app.add_subcommand("diagnose", "Correlation decay of f(X_i) against lag");
    diagnose->add_option("input", diag.input, "Input CSV")->required();
    diagnose->add_option("--function", diag.function, "identity, square, abs or indicator:<t>");
    diagnose->add_option("--lags", diag.lags, "Lags as a..b or a comma list");
    diagnose->add_option("-o,--output", diag.output, "Write m,corr CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? static_cast<int>(kOk) : static_cast<int>(kUserInput);
    }

    if (*estimate) return cmd_estimate(est, std::cout, std::cerr);
    if (*simulate) {
        const int prepared = guarded("simulate", std::cerr, [&] {
            if (config_path) {
                const auto seed = sim.seed;
                const auto output = sim.output;
                try {
                    sim.spec = generator_from_json(json::parse(read_text_file(*config_path)));
                } catch (const json::parse_error& e) {
                    throw InvalidInput(*config_path + ": " + e.what());
                }
                sim.seed = seed;
                sim.output = output;
            } else {
                sim.spec.kind = parse_generator_kind(kind);
                if (alpha) sim.spec.acf = AcfSpec{*alpha};
                sim.spec.transforms = {parse_transform(g1), parse_transform(g2)};
                sim.spec.pre_law = MarginalLaw::parse(pre);
                sim.spec.post_law = MarginalLaw::parse(post);
                sim.spec.linear.switch_stream = !keep_stream;
                sim.spec.linear.flip_signs = !keep_signs;
            }
            sim.spec.validate();
            return static_cast<int>(kOk);
        });
        if (prepared != kOk) return prepared;
        return cmd_simulate(sim, std::cout, std::cerr);
    }
    if (*experiment) return cmd_experiment(exp, std::cout, std::cerr);
    if (*diagnose) return cmd_diagnose(diag, std::cout, std::cerr);
    return kUserInput;
}

}  // namespace cpd::cli
