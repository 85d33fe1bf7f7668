#pragma once
// Command-line surface. Exit codes: 0 success, 1 internal error, 2 invalid
// user input, 3 numerical failure (non positive definite covariance).

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "cpd/generators.hpp"
#include "cpd/montecarlo.hpp"

namespace cpd::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kInternal = 1, kUserInput = 2, kNumerical = 3 };

struct EstimateOptions {
    std::filesystem::path input;
    std::string norm = "ks";
    double gamma = 0.5;
    std::optional<std::filesystem::path> output;
    std::optional<std::filesystem::path> profile;
};

struct SimulateOptions {
    GeneratorSpec spec;
    SeedSpec seed;
    std::filesystem::path output;
};

struct ExperimentOptions {
    std::filesystem::path config;
    std::filesystem::path output;
    std::optional<unsigned> workers;
};

struct DiagnoseOptions {
    std::filesystem::path input;
    std::string function = "identity";
    std::string lags = "1..20";
    std::optional<std::filesystem::path> output;
};

int cmd_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_experiment(const ExperimentOptions& opts, std::ostream& out, std::ostream& err);
int cmd_diagnose(const DiagnoseOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run(int argc, char** argv);

// JSON schema shared by `simulate --config` and `experiment`.
GeneratorSpec generator_from_json(const nlohmann::json& j);
nlohmann::json generator_to_json(const GeneratorSpec& spec);
SeminormSpec seminorm_from_json(const nlohmann::json& j);
nlohmann::json seminorm_to_json(const SeminormSpec& spec);
mc::ExperimentConfig experiment_from_json(const nlohmann::json& j);
nlohmann::json experiment_to_json(const mc::ExperimentConfig& cfg);

/// Results CSV with header n,alpha,norm,gamma,reps,mae,ci_lo,ci_hi,n_mae.
/// Failed cells carry empty numeric fields and a tenth `error: ...` field.
std::string results_csv(const std::vector<mc::MaeRow>& rows);

/// Provenance record written next to every output file.
nlohmann::json run_manifest(const std::string& command, const nlohmann::json& config,
                            std::uint64_t master_seed);

}  // namespace cpd::cli
