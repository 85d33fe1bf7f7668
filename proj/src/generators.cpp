#include "cpd/generators.hpp"

#include <cmath>
#include <sstream>

#include "cpd/error.hpp"
#include "cpd/io.hpp"
#include "cpd/simd/kernels.hpp"

namespace cpd {

namespace {

constexpr double kMinInnovationVariance = 1e-12;

// Innovation streams: 0 drives the Gaussian / first linear stream, 1 the
// post-change linear stream, 2 and 3 the iid pre/post laws.
constexpr std::uint64_t kPrimaryStream = 0;
constexpr std::uint64_t kSecondaryStream = 1;
constexpr std::uint64_t kPreLawStream = 2;
constexpr std::uint64_t kPostLawStream = 3;

}  // namespace

double polynomial_acf(double alpha, std::size_t lag) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidInput("acf exponent alpha must be > 0");
    const double m = static_cast<double>(lag);
    return std::pow(1.0 + m * m, -alpha / 4.0);
}

double AcfSpec::at(std::size_t lag) const { return polynomial_acf(alpha, lag); }

void AcfSpec::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidInput("acf exponent alpha must be > 0");
}

Transform parse_transform(const std::string& name) {
    if (name == "identity") return Transform::Identity;
    if (name == "square-minus-one") return Transform::SquareMinusOne;
    if (name == "one-minus-square") return Transform::OneMinusSquare;
    if (name == "negate") return Transform::Negate;
    throw InvalidInput("unknown transform '" + name +
                       "' (expected identity, square-minus-one, one-minus-square, negate)");
}

std::string transform_name(Transform t) {
    switch (t) {
        case Transform::Identity:
            return "identity";
        case Transform::SquareMinusOne:
            return "square-minus-one";
        case Transform::OneMinusSquare:
            return "one-minus-square";
        case Transform::Negate:
            return "negate";
    }
    return "?";
}

double apply_transform(Transform t, double y) {
    switch (t) {
        case Transform::Identity:
            return y;
        case Transform::SquareMinusOne:
            return y * y - 1.0;
        case Transform::OneMinusSquare:
            return 1.0 - y * y;
        case Transform::Negate:
            return -y;
    }
    return y;
}

double MarginalLaw::draw(RandomStream& rng) const {
    switch (family) {
        case Family::Normal:
            return first + std::sqrt(second) * rng.normal();
        case Family::Uniform:
            return first + (second - first) * rng.uniform();
        case Family::Exponential:
            return -std::log1p(-rng.uniform()) / first;
    }
    return 0.0;
}

void MarginalLaw::validate() const {
    if (!std::isfinite(first) || !std::isfinite(second)) throw InvalidInput("law parameters must be finite");
    switch (family) {
        case Family::Normal:
            if (!(second > 0.0)) throw InvalidInput("normal variance must be > 0");
            return;
        case Family::Uniform:
            if (!(second > first)) throw InvalidInput("uniform law needs lower < upper");
            return;
        case Family::Exponential:
            if (!(first > 0.0)) throw InvalidInput("exponential rate must be > 0");
            return;
    }
}

MarginalLaw MarginalLaw::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string family = text.substr(0, colon);
    std::vector<double> params;
    if (colon != std::string::npos) {
        std::stringstream in(text.substr(colon + 1));
        for (std::string item; std::getline(in, item, ',');) {
            try {
                std::size_t used = 0;
                params.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw InvalidInput("bad parameter '" + item + "' in law '" + text + "'");
            }
        }
    }
    MarginalLaw law;
    if (family == "normal" && params.size() == 2) {
        law = {Family::Normal, params[0], params[1]};
    } else if (family == "uniform" && params.size() == 2) {
        law = {Family::Uniform, params[0], params[1]};
    } else if (family == "exponential" && params.size() == 1) {
        law = {Family::Exponential, params[0], 0.0};
    } else {
        throw InvalidInput("cannot parse law '" + text +
                           "' (expected normal:<mean>,<var>, uniform:<lo>,<hi>, exponential:<rate>)");
    }
    law.validate();
    return law;
}

std::string MarginalLaw::describe() const {
    switch (family) {
        case Family::Normal:
            return "normal:" + format_shortest(first) + "," + format_shortest(second);
        case Family::Uniform:
            return "uniform:" + format_shortest(first) + "," + format_shortest(second);
        case Family::Exponential:
            return "exponential:" + format_shortest(first);
    }
    return "?";
}

void LinearProcessSpec::validate() const {
    if (!(beta > 0.5) || !std::isfinite(beta)) {
        throw InvalidInput("linear process needs beta > 1/2 for square-summable coefficients");
    }
}

std::string generator_kind_name(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::Iid:
            return "iid";
        case GeneratorKind::GaussianSubordinated:
            return "gaussian";
        case GeneratorKind::LinearProcess:
            return "linear";
    }
    return "?";
}

GeneratorKind parse_generator_kind(const std::string& name) {
    if (name == "iid") return GeneratorKind::Iid;
    if (name == "gaussian") return GeneratorKind::GaussianSubordinated;
    if (name == "linear") return GeneratorKind::LinearProcess;
    throw InvalidInput("unknown generator kind '" + name + "' (expected iid, gaussian, linear)");
}

void GeneratorSpec::validate() const {
    if (!(theta > 0.0 && theta < 1.0)) throw InvalidInput("theta must lie in (0, 1)");
    if (n < 2) throw InvalidInput("series length n must be >= 2");
    switch (kind) {
        case GeneratorKind::Iid:
            pre_law.validate();
            post_law.validate();
            break;
        case GeneratorKind::GaussianSubordinated:
            if (acf) acf->validate();
            break;
        case GeneratorKind::LinearProcess:
            linear.validate();
            break;
    }
}

std::size_t change_index(std::size_t n, double theta) {
    if (!(theta > 0.0 && theta < 1.0)) throw InvalidInput("theta must lie in (0, 1)");
    // Absorb representation error so that e.g. theta = 0.29, n = 100 gives 29.
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * theta + 1e-9));
}

std::vector<double> durbin_levinson_filter(const AcfSpec& acf, std::span<const double> innovations) {
    acf.validate();
    const std::size_t n = innovations.size();
    if (n == 0) return {};
    const auto& kern = simd::active_kernels();

    // Autocovariances stored reversed so that r(t-1), ..., r(1) and
    // Y_t, ..., Y_1 are contiguous slices aligned with phi_1, phi_2, ...
    std::vector<double> r(n);
    for (std::size_t m = 0; m < n; ++m) r[m] = acf.at(m);
    std::vector<double> r_rev(r.rbegin(), r.rend());
    std::vector<double> y_rev(n);
    std::vector<double> phi(n, 0.0);
    std::vector<double> phi_next(n, 0.0);

    double v = r[0];
    if (v < kMinInnovationVariance) throw CovarianceNotPD("autocovariance at lag 0 is not positive");
    y_rev[n - 1] = std::sqrt(v) * innovations[0];

    for (std::size_t t = 1; t < n; ++t) {
        const double acc = kern.dot(phi.data(), r_rev.data() + (n - t), t - 1);
        const double kappa = (r[t] - acc) / v;
        kern.reflect_update(phi.data(), kappa, phi_next.data(), t - 1);
        phi_next[t - 1] = kappa;
        std::swap(phi, phi_next);

        v *= (1.0 - kappa * kappa);
        if (!(v >= kMinInnovationVariance)) {
            throw CovarianceNotPD("innovation variance collapsed to " + format_shortest(v) +
                                  " at step " + std::to_string(t) +
                                  "; the autocovariance is not numerically positive definite");
        }
        const double prediction = kern.dot(phi.data(), y_rev.data() + (n - t), t);
        y_rev[n - 1 - t] = prediction + std::sqrt(v) * innovations[t];
    }
    return std::vector<double>(y_rev.rbegin(), y_rev.rend());
}

std::vector<double> normal_innovations(std::size_t n, const SeedSpec& seed, std::uint64_t stream_id) {
    RandomStream rng(seed, stream_id);
    std::vector<double> eps(n);
    for (double& e : eps) e = rng.normal();
    return eps;
}

std::vector<double> durbin_levinson_sample(const AcfSpec& acf, std::size_t n, const SeedSpec& seed) {
    if (n < 1) throw InvalidInput("sample length must be >= 1");
    return durbin_levinson_filter(acf, normal_innovations(n, seed, kPrimaryStream));
}

std::vector<double> apply_change(std::span<const double> y, double theta, const TransformPair& transforms) {
    const std::size_t cut = change_index(y.size(), theta);
    std::vector<double> x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        x[i] = apply_transform(i < cut ? transforms.pre : transforms.post, y[i]);
    }
    return x;
}

std::vector<double> linear_process_coefficients(double beta, std::size_t lag_truncation, bool negated) {
    const std::size_t L = lag_truncation;
    std::vector<double> b(2 * L + 1);
    b[L] = 1.0;
    for (std::size_t k = 1; k <= L; ++k) {
        const double c = std::pow(static_cast<double>(k), -beta);
        b[L + k] = negated ? -c : c;
        b[L - k] = negated ? -c : c;
    }
    return b;
}

std::vector<double> linear_process_sample(std::size_t n, double theta, const LinearProcessSpec& spec,
                                          const SeedSpec& seed) {
    spec.validate();
    const std::size_t L = spec.lag_truncation;
    const std::size_t cut = change_index(n, theta);
    const auto pre = linear_process_coefficients(spec.beta, L, false);
    const auto post = linear_process_coefficients(spec.beta, L, spec.flip_signs);
    const auto eps1 = normal_innovations(n + 2 * L, seed, kPrimaryStream);
    const auto eps2 = spec.switch_stream ? normal_innovations(n + 2 * L, seed, kSecondaryStream) : eps1;

    // eps[j] holds innovation index j - L + 1, so X_i (1-based) uses
    // eps[i - 1 + L - k] for k = -L..L.
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool before = i < cut;
        const auto& b = before ? pre : post;
        const auto& eps = before ? eps1 : eps2;
        double sum = 0.0;
        for (std::size_t idx = 0; idx <= 2 * L; ++idx) {
            // idx = k + L, innovation position i + L - k = i + 2L - idx
            sum += b[idx] * eps[i + 2 * L - idx];
        }
        x[i] = sum;
    }
    return x;
}

GeneratedSeries generate(const GeneratorSpec& spec, const SeedSpec& seed) {
    spec.validate();
    GeneratedSeries out;
    out.true_change_index = change_index(spec.n, spec.theta);
    switch (spec.kind) {
        case GeneratorKind::Iid: {
            RandomStream pre(seed, kPreLawStream);
            RandomStream post(seed, kPostLawStream);
            out.values.resize(spec.n);
            for (std::size_t i = 0; i < spec.n; ++i) {
                out.values[i] = i < out.true_change_index ? spec.pre_law.draw(pre) : spec.post_law.draw(post);
            }
            break;
        }
        case GeneratorKind::GaussianSubordinated: {
            const auto y = spec.acf ? durbin_levinson_sample(*spec.acf, spec.n, seed)
                                    : normal_innovations(spec.n, seed, kPrimaryStream);
            out.values = apply_change(y, spec.theta, spec.transforms);
            break;
        }
        case GeneratorKind::LinearProcess: {
            const auto z = linear_process_sample(spec.n, spec.theta, spec.linear, seed);
            out.values = apply_change(z, spec.theta, spec.transforms);
            break;
        }
    }
    return out;
}

}  // namespace cpd
