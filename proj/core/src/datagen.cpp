#include "uqfi/datagen.hpp"

#include <cmath>

#include "uqfi/errors.hpp"
#include "uqfi/rng.hpp"

namespace uqfi {

ErrorLaw parse_error_law(const std::string& name) {
    ErrorLaw law;
    if (name == "normal") law.kind = ErrorLaw::Kind::StdNormal;
    else if (name == "t3") law.kind = ErrorLaw::Kind::StudentT3;
    else if (name == "exp2") law.kind = ErrorLaw::Kind::Exponential2;
    else if (name == "cauchy") law.kind = ErrorLaw::Kind::Cauchy01;
    else throw ValidationError("unknown error law '" + name + "' (expected normal|t3|exp2|cauchy)");
    return law;
}

std::string to_string(ErrorLaw::Kind kind) {
    switch (kind) {
        case ErrorLaw::Kind::StdNormal: return "normal";
        case ErrorLaw::Kind::StudentT3: return "t3";
        case ErrorLaw::Kind::Exponential2: return "exp2";
        case ErrorLaw::Kind::Cauchy01: return "cauchy";
    }
    return "unknown";
}

Matrix sample_features(const FeatureSpec& spec, std::size_t n) {
    if (spec.p == 0) throw ValidationError("sample_features: p must be positive");
    if (!(spec.rho > -1.0 && spec.rho < 1.0))
        throw ValidationError("sample_features: rho must lie in (-1, 1)");

    // AR(1) recursion: x_1 = z_1, x_j = rho x_{j-1} + sqrt(1-rho^2) z_j gives
    // exactly Cov(x_j, x_k) = rho^{|j-k|} for iid standard normal z.
    Matrix x(n, spec.p);
    Rng rng(Rng::derive(spec.seed, 0x66656174)); // "feat" stream
    const double scale = std::sqrt(1.0 - spec.rho * spec.rho);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = x.row(i);
        row[0] = rng.next_normal();
        for (std::size_t j = 1; j < spec.p; ++j)
            row[j] = spec.rho * row[j - 1] + scale * rng.next_normal();
    }
    return x;
}

std::vector<double> sample_errors(const ErrorLaw& law, std::size_t n, std::uint64_t seed) {
    std::vector<double> eps(n);
    Rng rng(Rng::derive(seed, 0x65727273)); // "errs" stream
    switch (law.kind) {
        case ErrorLaw::Kind::StdNormal:
            for (auto& e : eps) e = rng.next_normal();
            break;
        case ErrorLaw::Kind::StudentT3:
            for (auto& e : eps) e = rng.next_t3();
            break;
        case ErrorLaw::Kind::Exponential2: {
            // rate 2 (mean 1/2) unless the law is configured mean-2
            const double scale = law.exp2_is_rate ? 0.5 : 2.0;
            for (auto& e : eps) e = scale * rng.next_exponential();
            break;
        }
        case ErrorLaw::Kind::Cauchy01:
            for (auto& e : eps) e = rng.next_cauchy();
            break;
    }
    return eps;
}

double model_outcome(const ModelSpec& model, std::span<const double> row, double eps) {
    if (model.id < 1 || model.id > 9)
        throw ValidationError("model id must be in 1..9, got " + std::to_string(model.id));
    if (row.size() < 4)
        throw ValidationError("benchmark models need p >= 4 features, got " +
                              std::to_string(row.size()));

    const double x1 = row[0];
    const double x2 = row[1];
    const double x3 = row[2];
    switch (model.id) {
        case 1: {
            double b = 1.0 + 2.0 * x1;
            return b * b - 5.0 * x2 + eps;
        }
        case 2:
            return 1.0 + (std::fabs(x1) <= 1.0 ? std::exp(2.0 * x1) : 0.0) - 5.0 * x2 + eps;
        case 3:
            return 1.0 + 2.0 * std::cos(x1) - 5.0 * x2 + eps;
        case 4: {
            double b = 1.0 + 2.0 * x1 + x3;
            return b * b - 5.0 * x2 + eps;
        }
        case 5:
            return 1.0 + (std::fabs(x1) <= 1.0 ? std::exp(2.0 * x1 + x3) : 0.0) - 5.0 * x2 + eps;
        case 6: {
            double b = 1.0 + 2.0 * std::cos(x1) + x3;
            return b * b - 5.0 * x2 + eps;
        }
        case 7: {
            double b = 1.0 + 2.0 * x1 + x3;
            return b * b - 5.0 * x2 + std::exp(x1) * eps;
        }
        case 8:
            return 1.0 + (std::fabs(x1) <= 1.0 ? std::exp(2.0 * x1 + x3) : 0.0) - 5.0 * x2 +
                   std::exp(x1) * eps;
        case 9:
            return 1.0 + 2.0 * std::cos(x1) - 5.0 * x2 + std::exp(x1) * eps;
    }
    return 0.0; // unreachable
}

Dataset generate(const ModelSpec& model, const FeatureSpec& features, const ErrorLaw& errors,
                 std::size_t n, std::uint64_t error_seed) {
    if (model.id < 1 || model.id > 9)
        throw ValidationError("model id must be in 1..9, got " + std::to_string(model.id));
    if (features.p < 4)
        throw ValidationError("benchmark models need p >= 4, got p=" +
                              std::to_string(features.p));
    if (n == 0) throw ValidationError("generate: n must be positive");

    Dataset data;
    data.x = sample_features(features, n);
    auto eps = sample_errors(errors, n, error_seed);
    data.y.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        data.y[i] = model_outcome(model, data.x.row(i), eps[i]);

    data.meta.source = "simulate";
    data.meta.model_id = model.id;
    data.meta.error_law = to_string(errors.kind);
    data.meta.feature_seed = features.seed;
    data.meta.error_seed = error_seed;
    data.meta.rho = features.rho;
    return data;
}

Dataset generate_linear_benchmark(const FeatureSpec& features, const ErrorLaw& errors,
                                  std::size_t n, std::uint64_t error_seed) {
    if (features.p < 2)
        throw ValidationError("linear benchmark needs p >= 2, got p=" +
                              std::to_string(features.p));
    if (n == 0) throw ValidationError("generate_linear_benchmark: n must be positive");

    Dataset data;
    data.x = sample_features(features, n);
    auto eps = sample_errors(errors, n, error_seed);
    data.y.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        data.y[i] = 1.0 - 2.0 * data.x(i, 0) + 5.0 * data.x(i, 1) + eps[i];

    data.meta.source = "simulate";
    data.meta.model_id = 0;
    data.meta.error_law = to_string(errors.kind);
    data.meta.feature_seed = features.seed;
    data.meta.error_seed = error_seed;
    data.meta.rho = features.rho;
    return data;
}

} // namespace uqfi
