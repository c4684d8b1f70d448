#include "uqfi/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uqfi/dataset.hpp"
#include "uqfi/errors.hpp"
#include "uqfi/predictor.hpp"

namespace uqfi {

namespace {

void require_finite(std::span<const double> values, const char* who) {
    for (double v : values)
        if (!std::isfinite(v))
            throw ValidationError(std::string(who) + ": input contains a non-finite value");
}

double kernel_value(KdeConfig::Kernel kernel, double u) {
    switch (kernel) {
        case KdeConfig::Kernel::Gaussian:
            return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
        case KdeConfig::Kernel::Epanechnikov:
            return std::fabs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    }
    return 0.0;
}

} // namespace

KdeConfig::Kernel parse_kernel(const std::string& name) {
    if (name == "gaussian") return KdeConfig::Kernel::Gaussian;
    if (name == "epanechnikov") return KdeConfig::Kernel::Epanechnikov;
    throw ValidationError("unknown kernel '" + name + "' (expected gaussian|epanechnikov)");
}

void QuantileGrid::validate() const {
    if (taus.empty()) throw ValidationError("quantile grid is empty");
    double prev = 0.0;
    for (double t : taus) {
        if (!(t > 0.0 && t < 1.0))
            throw ValidationError("quantile level " + std::to_string(t) + " outside (0,1)");
        if (t <= prev)
            throw ValidationError("quantile grid must be strictly increasing");
        prev = t;
    }
}

double TailConfig::effective_tau_n(std::size_t n) const {
    if (n == 0) throw ValidationError("effective_tau_n: n must be positive");
    double rule = std::pow(static_cast<double>(n), -tau_n_exponent);
    double floor = static_cast<double>(min_exceedances) / static_cast<double>(n);
    double tau_n = std::max(rule, floor);
    if (tau_n >= 0.5)
        throw ValidationError("tail fraction tau_n >= 0.5 at n=" + std::to_string(n) +
                              "; sample too small for a tail fit");
    return tau_n;
}

double empirical_quantile(std::span<const double> values, double tau) {
    if (values.empty()) throw ValidationError("empirical_quantile: empty sample");
    if (!(tau > 0.0 && tau < 1.0))
        throw ValidationError("empirical_quantile: tau must lie in (0,1)");
    require_finite(values, "empirical_quantile");

    const std::size_t n = values.size();
    // The check-loss sum has derivative #{v <= q} - n tau, so the lowest
    // minimizer is the ceil(n tau) order statistic (1-based).
    std::size_t idx = static_cast<std::size_t>(
        std::ceil(static_cast<double>(n) * tau));
    idx = std::clamp<std::size_t>(idx, 1, n);

    std::vector<double> work(values.begin(), values.end());
    std::nth_element(work.begin(), work.begin() + (idx - 1), work.end());
    return work[idx - 1];
}

double silverman_bandwidth(std::span<const double> values) {
    if (values.size() < 2) throw ValidationError("silverman_bandwidth: need at least 2 points");
    require_finite(values, "silverman_bandwidth");

    const std::size_t n = values.size();
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) {
        double d = v - mean;
        ss += d * d;
    }
    double sd = std::sqrt(ss / static_cast<double>(n - 1));
    double iqr = empirical_quantile(values, 0.75) - empirical_quantile(values, 0.25);

    // min over the positive candidates; a zero IQR alone (heavy ties) must
    // not zero out the bandwidth
    double a = 0.0;
    if (sd > 0.0 && iqr > 0.0) a = std::min(sd, iqr / 1.34);
    else if (sd > 0.0) a = sd;
    else if (iqr > 0.0) a = iqr / 1.34;
    else throw NumericError("silverman_bandwidth: sample has zero spread");

    return 0.9 * a * std::pow(static_cast<double>(n), -0.2);
}

double kde_at(std::span<const double> values, double point, const KdeConfig& config) {
    if (values.empty()) throw ValidationError("kde_at: empty sample");
    if (!std::isfinite(point)) throw ValidationError("kde_at: evaluation point is not finite");
    require_finite(values, "kde_at");

    double b = config.bandwidth ? *config.bandwidth : silverman_bandwidth(values);
    if (!(b > 0.0)) throw NumericError("kde_at: bandwidth must be positive");

    double s = 0.0;
    for (double v : values) s += kernel_value(config.kernel, (v - point) / b);
    return s / (static_cast<double>(values.size()) * b);
}

HillFit hill_estimator(std::span<const double> values, double tau_n,
                       std::size_t min_exceedances, double gamma_max) {
    if (values.empty()) throw ValidationError("hill_estimator: empty sample");
    if (!(tau_n > 0.0 && tau_n < 1.0))
        throw ValidationError("hill_estimator: tau_n must lie in (0,1)");
    require_finite(values, "hill_estimator");

    const std::size_t n = values.size();
    const double threshold = empirical_quantile(values, 1.0 - tau_n);

    auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    const double range = *mx_it - *mn_it;
    if (range <= 0.0)
        throw TailFitError("hill_estimator: degenerate sample (zero range)", threshold, 0,
                           static_cast<long>(n));

    // Positive-support shift: when the threshold is not positive, translate
    // so the shifted threshold equals the sample range.  The shift scales
    // with the data, which keeps the whole tail fit scale-equivariant.
    const double shift = threshold > 0.0 ? 0.0 : range - threshold;
    if (!(threshold + shift > 0.0))
        throw TailFitError("hill_estimator: threshold not positive after shift", threshold, 0,
                           static_cast<long>(n));

    std::size_t tail_count = 0;   // values >= threshold (validates tail mass)
    std::size_t exceedances = 0;  // strict exceedances entering the sum
    double log_sum = 0.0;
    // log of the ratio, not a difference of logs: the ratio of two values
    // that scale together is bit-identical, keeping gamma_hat (and the whole
    // tail fit) exactly scale-equivariant
    const double denom = threshold + shift;
    for (double v : values) {
        if (v >= threshold) ++tail_count;
        if (v > threshold) {
            ++exceedances;
            log_sum += std::log((v + shift) / denom);
        }
    }
    if (tail_count < min_exceedances)
        throw TailFitError("hill_estimator: too few tail points", threshold,
                           static_cast<long>(tail_count), static_cast<long>(n));

    double gamma = log_sum / (static_cast<double>(n) * tau_n);
    gamma = std::clamp(gamma, 0.0, gamma_max);
    return HillFit{gamma, threshold, exceedances, shift};
}

double ResidualTailModel::operator()(double r) const {
    if (r >= residuals_.front() && r <= residuals_.back()) {
        KdeConfig body = kde_;
        body.bandwidth = b1_;
        return kde_at(residuals_, r, body);
    }
    return r > residuals_.back() ? upper_tail_density(r) : lower_tail_density(r);
}

double ResidualTailModel::upper_tail_density(double r) const {
    const auto& fit = upper_.fit;
    if (fit.gamma_hat == 0.0) return 0.0; // light tail: no mass beyond the range
    double ratio = (r + fit.shift) / (fit.threshold + fit.shift);
    return std::pow(ratio, -1.0 / fit.gamma_hat) * upper_.density_at_threshold;
}

double ResidualTailModel::lower_tail_density(double r) const {
    const auto& fit = lower_.fit;
    if (fit.gamma_hat == 0.0) return 0.0;
    double ratio = (-r + fit.shift) / (fit.threshold + fit.shift);
    return std::pow(ratio, -1.0 / fit.gamma_hat) * lower_.density_at_threshold;
}

ResidualTailModel fit_residual_density(std::vector<double> residuals, const KdeConfig& kde,
                                       const TailConfig& tail) {
    if (residuals.size() < 30)
        throw ValidationError("fit_residual_density: need n >= 30 residuals, got " +
                              std::to_string(residuals.size()));
    require_finite(residuals, "fit_residual_density");

    // canonicalize to sorted order up front: every derived quantity (bandwidth,
    // Hill sums, KDE anchors) then depends only on the multiset of values, so
    // recomputing any of them from residuals() reproduces the stored bits
    std::sort(residuals.begin(), residuals.end());

    const std::size_t n = residuals.size();
    const double tau_n = tail.effective_tau_n(n);

    ResidualTailModel model;
    model.kde_ = kde;
    model.b1_ = kde.bandwidth ? *kde.bandwidth : silverman_bandwidth(residuals);
    // Same rule for the anchor bandwidth; kept separate because the two play
    // different roles (body smoothing vs threshold anchoring).
    model.b2_ = model.b1_;

    model.upper_.fit = hill_estimator(residuals, tau_n, tail.min_exceedances, tail.gamma_max);
    std::vector<double> negated(n);
    for (std::size_t i = 0; i < n; ++i) negated[i] = -residuals[n - 1 - i];
    model.lower_.fit = hill_estimator(negated, tau_n, tail.min_exceedances, tail.gamma_max);

    KdeConfig anchor = kde;
    anchor.bandwidth = model.b2_;
    model.upper_.density_at_threshold = kde_at(residuals, model.upper_.fit.threshold, anchor);
    model.lower_.density_at_threshold = kde_at(negated, model.lower_.fit.threshold, anchor);

    model.residuals_ = std::move(residuals);
    return model;
}

double out_of_range_fraction(const Dataset& data, const Predictor& predictor, double tau) {
    if (data.n() == 0) throw ValidationError("out_of_range_fraction: empty dataset");
    if (!(tau > 0.0 && tau < 1.0))
        throw ValidationError("out_of_range_fraction: tau must lie in (0,1)");

    const std::size_t n = data.n();
    std::vector<double> yhat(n);
    for (std::size_t i = 0; i < n; ++i) yhat[i] = predictor.predict(data.x.row(i));

    double r_min = data.y[0] - yhat[0];
    double r_max = r_min;
    for (std::size_t i = 1; i < n; ++i) {
        double r = data.y[i] - yhat[i];
        r_min = std::min(r_min, r);
        r_max = std::max(r_max, r);
    }

    const double q = empirical_quantile(data.y, tau);
    std::size_t outside = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double arg = q - yhat[i];
        if (arg < r_min || arg > r_max) ++outside;
    }
    return static_cast<double>(outside) / static_cast<double>(n);
}

} // namespace uqfi
