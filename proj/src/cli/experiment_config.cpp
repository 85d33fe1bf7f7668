#include <cmath>
#include <limits>

#include "cpd/cli.hpp"
#include "cpd/error.hpp"
#include "cpd/io.hpp"

namespace cpd::cli {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidInput(std::string("field '") + key + "' has the wrong type");
    }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw InvalidInput(std::string("unknown key '") + key + "' in " + where);
    }
}

std::size_t get_size(const json& v, const char* what) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
        throw InvalidInput(std::string(what) + " must be an integer");
    }
    const auto value = v.get<std::int64_t>();
    if (value < 0) throw InvalidInput(std::string(what) + " must be nonnegative");
    return static_cast<std::size_t>(value);
}

}  // namespace

GeneratorSpec generator_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("generator must be a JSON object");
    reject_unknown(j,
                   {"kind", "theta", "n", "alpha", "transforms", "beta", "lagTruncation", "switchStream",
                    "flipSigns", "preLaw", "postLaw"},
                   "generator");
    GeneratorSpec spec;
    spec.kind = parse_generator_kind(get_or<std::string>(j, "kind", "gaussian"));
    spec.theta = get_or<double>(j, "theta", spec.theta);
    if (j.contains("n")) spec.n = get_size(j.at("n"), "generator n");
    if (j.contains("alpha") && !j.at("alpha").is_null()) {
        if (!j.at("alpha").is_number()) throw InvalidInput("generator alpha must be a number");
        spec.acf = AcfSpec{j.at("alpha").get<double>()};
    }
    if (j.contains("transforms")) {
        const auto& t = j.at("transforms");
        if (!t.is_array() || t.size() != 2 || !t[0].is_string() || !t[1].is_string()) {
            throw InvalidInput("transforms must be a pair of names");
        }
        spec.transforms = {parse_transform(t[0].get<std::string>()), parse_transform(t[1].get<std::string>())};
    }
    spec.linear.beta = get_or<double>(j, "beta", spec.linear.beta);
    if (j.contains("lagTruncation")) spec.linear.lag_truncation = get_size(j.at("lagTruncation"), "lagTruncation");
    spec.linear.switch_stream = get_or<bool>(j, "switchStream", spec.linear.switch_stream);
    spec.linear.flip_signs = get_or<bool>(j, "flipSigns", spec.linear.flip_signs);
    if (j.contains("preLaw")) spec.pre_law = MarginalLaw::parse(get_or<std::string>(j, "preLaw", ""));
    if (j.contains("postLaw")) spec.post_law = MarginalLaw::parse(get_or<std::string>(j, "postLaw", ""));
    return spec;
}

json generator_to_json(const GeneratorSpec& spec) {
    json j;
    j["kind"] = generator_kind_name(spec.kind);
    j["theta"] = spec.theta;
    j["n"] = spec.n;
    switch (spec.kind) {
        case GeneratorKind::Iid:
            j["preLaw"] = spec.pre_law.describe();
            j["postLaw"] = spec.post_law.describe();
            break;
        case GeneratorKind::GaussianSubordinated:
            j["alpha"] = spec.acf ? json(spec.acf->alpha) : json(nullptr);
            j["transforms"] = {transform_name(spec.transforms.pre), transform_name(spec.transforms.post)};
            break;
        case GeneratorKind::LinearProcess:
            j["beta"] = spec.linear.beta;
            j["lagTruncation"] = spec.linear.lag_truncation;
            j["switchStream"] = spec.linear.switch_stream;
            j["flipSigns"] = spec.linear.flip_signs;
            j["transforms"] = {transform_name(spec.transforms.pre), transform_name(spec.transforms.post)};
            break;
    }
    return j;
}

SeminormSpec seminorm_from_json(const json& j) {
    if (j.is_string()) return parse_seminorm(j.get<std::string>());
    if (!j.is_object()) throw InvalidInput("norm must be a string or an object");
    reject_unknown(j, {"kind", "p", "weights", "truncation"}, "norm");
    const auto kind = get_or<std::string>(j, "kind", "");
    SeminormSpec spec;
    if (kind == "ks") {
        spec = SeminormSpec::kolmogorov_smirnov();
    } else if (kind == "lp") {
        spec = SeminormSpec::lp(get_or<double>(j, "p", 1.0));
    } else if (kind == "moments") {
        spec = SeminormSpec::weighted_moments(get_or<std::vector<double>>(j, "weights", {}),
                                              get_or<double>(j, "truncation", 10.0));
    } else {
        throw InvalidInput("norm kind must be ks, lp or moments");
    }
    spec.validate();
    return spec;
}

json seminorm_to_json(const SeminormSpec& spec) {
    switch (spec.kind) {
        case NormKind::KolmogorovSmirnov:
            return {{"kind", "ks"}};
        case NormKind::LpEmpirical:
            return {{"kind", "lp"}, {"p", spec.p}};
        case NormKind::WeightedMoments:
            return {{"kind", "moments"}, {"weights", spec.moment_weights}, {"truncation", spec.truncation}};
    }
    return {};
}

mc::ExperimentConfig experiment_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("experiment config must be a JSON object");
    reject_unknown(j, {"generator", "nGrid", "alphaGrid", "norm", "gamma", "replications", "masterSeed"},
                   "experiment config");
    mc::ExperimentConfig cfg;
    cfg.generator = generator_from_json(j.value("generator", json::object()));
    if (!j.contains("nGrid") || !j.at("nGrid").is_array()) throw InvalidInput("nGrid must be an array");
    cfg.n_grid.clear();
    for (const auto& v : j.at("nGrid")) cfg.n_grid.push_back(get_size(v, "nGrid entries"));

    cfg.alpha_grid.clear();
    if (j.contains("alphaGrid")) {
        if (!j.at("alphaGrid").is_array()) throw InvalidInput("alphaGrid must be an array");
        for (const auto& v : j.at("alphaGrid")) {
            if (v.is_string() && v.get<std::string>() == "iid") {
                cfg.alpha_grid.push_back(mc::AlphaLevel{});
            } else if (v.is_number()) {
                cfg.alpha_grid.push_back(mc::AlphaLevel{v.get<double>()});
            } else {
                throw InvalidInput("alphaGrid entries must be positive numbers or \"iid\"");
            }
        }
    } else if (cfg.generator.acf) {
        cfg.alpha_grid.push_back(mc::AlphaLevel{cfg.generator.acf->alpha});
    } else {
        cfg.alpha_grid.push_back(mc::AlphaLevel{});
    }
    if (cfg.generator.kind != GeneratorKind::GaussianSubordinated) {
        for (const auto& level : cfg.alpha_grid) {
            if (level.alpha) throw InvalidInput("alphaGrid applies to the gaussian generator only");
        }
    }
    if (j.contains("norm")) cfg.norm = seminorm_from_json(j.at("norm"));
    cfg.gamma = get_or<double>(j, "gamma", cfg.gamma);
    if (j.contains("replications")) cfg.replications = get_size(j.at("replications"), "replications");
    if (j.contains("masterSeed")) {
        if (!j.at("masterSeed").is_number_unsigned()) {
            throw InvalidInput("masterSeed must be a nonnegative integer");
        }
        cfg.master_seed = j.at("masterSeed").get<std::uint64_t>();
    }
    cfg.validate();
    return cfg;
}

json experiment_to_json(const mc::ExperimentConfig& cfg) {
    json j;
    auto generator = generator_to_json(cfg.generator);
    generator.erase("n");
    generator.erase("alpha");
    j["generator"] = generator;
    j["nGrid"] = cfg.n_grid;
    json alphas = json::array();
    for (const auto& level : cfg.alpha_grid) alphas.push_back(level.alpha ? json(*level.alpha) : json("iid"));
    j["alphaGrid"] = alphas;
    j["norm"] = seminorm_to_json(cfg.norm);
    j["gamma"] = cfg.gamma;
    j["replications"] = cfg.replications;
    j["masterSeed"] = cfg.master_seed;
    return j;
}

std::string results_csv(const std::vector<mc::MaeRow>& rows) {
    std::string out = "n,alpha,norm,gamma,reps,mae,ci_lo,ci_hi,n_mae\n";
    for (const auto& row : rows) {
        out += std::to_string(row.n) + ',' + row.alpha_label + ',' + row.norm_label + ',' +
               format_shortest(row.gamma) + ',' + std::to_string(row.replications) + ',';
        if (row.ok()) {
            out += format_shortest(row.mae) + ',' + format_shortest(row.ci_low) + ',' +
                   format_shortest(row.ci_high) + ',' + format_shortest(row.n_times_mae);
        } else {
            std::string message = *row.error;
            for (char& c : message) {
                if (c == '"') c = '\'';
                if (c == '\n') c = ' ';
            }
            out += ",,,,\"error: " + message + '"';
        }
        out += '\n';
    }
    return out;
}

}  // namespace cpd::cli
