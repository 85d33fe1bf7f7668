#include "cpd/seminorms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "cpd/error.hpp"
#include "cpd/io.hpp"

namespace cpd {

SeminormSpec SeminormSpec::kolmogorov_smirnov() { return {}; }

SeminormSpec SeminormSpec::lp(double p) {
    SeminormSpec spec;
    spec.kind = NormKind::LpEmpirical;
    spec.p = p;
    return spec;
}

SeminormSpec SeminormSpec::weighted_moments(std::vector<double> weights, double truncation) {
    SeminormSpec spec;
    spec.kind = NormKind::WeightedMoments;
    if (weights.empty()) weights = {0.5, 0.25, 0.125, 0.0625};
    spec.moment_weights = std::move(weights);
    spec.truncation = truncation;
    return spec;
}

void SeminormSpec::validate() const {
    switch (kind) {
        case NormKind::KolmogorovSmirnov:
            return;
        case NormKind::LpEmpirical:
            if (!(p >= 1.0) || !std::isfinite(p)) {
                throw InvalidInput("L^p seminorm requires finite p >= 1");
            }
            return;
        case NormKind::WeightedMoments:
            if (moment_weights.empty()) throw InvalidInput("moment seminorm needs at least one weight");
            for (double w : moment_weights) {
                if (!(w > 0.0) || !std::isfinite(w)) {
                    throw InvalidInput("moment weights must be finite and strictly positive");
                }
            }
            if (!(truncation > 0.0)) throw InvalidInput("moment truncation M must be > 0");
            return;
    }
}

std::string SeminormSpec::label() const {
    switch (kind) {
        case NormKind::KolmogorovSmirnov:
            return "ks";
        case NormKind::LpEmpirical:
            return "l" + format_shortest(p);
        case NormKind::WeightedMoments:
            return "moments";
    }
    return "?";
}

namespace {

double parse_number(std::string_view text, const std::string& context) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw InvalidInput("cannot parse number '" + std::string(text) + "' in " + context);
    }
    return value;
}

}  // namespace

SeminormSpec parse_seminorm(const std::string& text) {
    SeminormSpec spec;
    if (text == "ks") {
        spec = SeminormSpec::kolmogorov_smirnov();
    } else if (text.size() > 1 && text[0] == 'l' && text.find(':') == std::string::npos) {
        spec = SeminormSpec::lp(parse_number(std::string_view(text).substr(1), "norm '" + text + "'"));
    } else if (text.rfind("lp:", 0) == 0) {
        spec = SeminormSpec::lp(parse_number(std::string_view(text).substr(3), "norm '" + text + "'"));
    } else if (text == "moments") {
        spec = SeminormSpec::weighted_moments();
    } else if (text.rfind("moments:", 0) == 0) {
        std::string body = text.substr(8);
        double truncation = 10.0;
        if (auto at = body.find('@'); at != std::string::npos) {
            truncation = parse_number(std::string_view(body).substr(at + 1), "norm '" + text + "'");
            body.resize(at);
        }
        std::vector<double> weights;
        std::stringstream in(body);
        for (std::string item; std::getline(in, item, ',');) {
            weights.push_back(parse_number(item, "norm '" + text + "'"));
        }
        if (weights.empty()) throw InvalidInput("norm '" + text + "' lists no weights");
        spec = SeminormSpec::weighted_moments(std::move(weights), truncation);
    } else {
        throw InvalidInput("unknown norm '" + text + "' (expected ks, l<p>, lp:<p>, moments)");
    }
    spec.validate();
    return spec;
}

double evaluate_indicator_norm(const SeminormSpec& spec, std::span<const double> d) {
    if (d.empty()) throw InvalidInput("indicator evaluations are empty");
    spec.validate();
    switch (spec.kind) {
        case NormKind::KolmogorovSmirnov: {
            double best = 0.0;
            for (double v : d) best = std::max(best, std::fabs(v));
            return best;
        }
        case NormKind::LpEmpirical: {
            double sum = 0.0;
            for (double v : d) sum += std::pow(std::fabs(v), spec.p);
            return std::pow(sum / static_cast<double>(d.size()), 1.0 / spec.p);
        }
        case NormKind::WeightedMoments:
            break;
    }
    throw InvalidInput("evaluate_indicator_norm needs a KS or L^p seminorm");
}

double evaluate_moment_norm(const SeminormSpec& spec, std::span<const double> moment_diffs) {
    if (spec.kind != NormKind::WeightedMoments) {
        throw InvalidInput("evaluate_moment_norm needs a weighted-moment seminorm");
    }
    spec.validate();
    if (moment_diffs.size() != spec.moment_weights.size()) {
        throw InvalidInput("moment differences and weights differ in length");
    }
    double total = 0.0;
    for (std::size_t p = 0; p < moment_diffs.size(); ++p) {
        total += spec.moment_weights[p] * std::fabs(moment_diffs[p]);
    }
    return total;
}

double truncated_power(double x, int power, double truncation) {
    if (!(std::fabs(x) < truncation)) return 0.0;
    double value = 1.0;
    for (int i = 0; i < power; ++i) value *= x;
    return value;
}

}  // namespace cpd
