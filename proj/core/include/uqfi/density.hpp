#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uqfi {

class Predictor;
struct Dataset;

/// Quantile levels at which curves are evaluated; strictly increasing, all
/// inside (0,1).
struct QuantileGrid {
    std::vector<double> taus{0.1, 0.3, 0.5, 0.7, 0.9};

    std::size_t size() const { return taus.size(); }
    void validate() const;
};

struct KdeConfig {
    enum class Kernel { Gaussian, Epanechnikov };

    Kernel kernel = Kernel::Gaussian;
    // Empty selects Silverman's rule 0.9 min(sd, IQR/1.34) n^{-1/5}.
    std::optional<double> bandwidth{};
};

/// Parse "gaussian" | "epanechnikov".
KdeConfig::Kernel parse_kernel(const std::string& name);

/// Controls the extreme-value tail fit of the residual density.
struct TailConfig {
    // Exceedance fraction rule tau_n = n^{-exponent}; k = n tau_n points
    // enter the Hill fit, so the default 0.4 keeps k = n^{0.6} growing while
    // tau_n -> 0.
    double tau_n_exponent = 0.4;
    std::size_t min_exceedances = 10;
    double gamma_max = 10.0;

    /// Effective exceedance fraction at sample size n (rule, floored so at
    /// least min_exceedances points are kept).
    double effective_tau_n(std::size_t n) const;
};

/// Lowest minimizer of the check loss: the ceil(n tau) order statistic.
double empirical_quantile(std::span<const double> values, double tau);

/// Silverman's rule-of-thumb bandwidth.
double silverman_bandwidth(std::span<const double> values);

/// Kernel density estimate of the sample at one point.
double kde_at(std::span<const double> values, double point, const KdeConfig& config = {});

struct HillFit {
    double gamma_hat = 0.0;   // clamped to [0, gamma_max]
    double threshold = 0.0;   // (1 - tau_n) empirical quantile, original scale
    std::size_t exceedances = 0;
    double shift = 0.0;       // positive-support shift applied before the logs
};

/// Hill tail-index fit over the exceedances above the (1-tau_n) quantile.
HillFit hill_estimator(std::span<const double> values, double tau_n,
                       std::size_t min_exceedances = 10, double gamma_max = 10.0);

struct TailAnchor {
    HillFit fit;
    double density_at_threshold = 0.0; // KDE (bandwidth b2) at the threshold
};

/// Residual density with extreme-value extrapolation beyond the sample
/// range: plain KDE inside [min R, max R], Pareto-ratio decay above the max,
/// and the mirrored construction below the min.
class ResidualTailModel {
public:
    double operator()(double r) const;

    /// Upper-tail extrapolation formula on its own (also valid at the
    /// threshold itself, where it reduces to the anchor density).
    double upper_tail_density(double r) const;
    double lower_tail_density(double r) const;

    const std::vector<double>& residuals() const { return residuals_; } // sorted
    double bandwidth_body() const { return b1_; }
    double bandwidth_anchor() const { return b2_; }
    double min_residual() const { return residuals_.front(); }
    double max_residual() const { return residuals_.back(); }
    const TailAnchor& upper() const { return upper_; }
    const TailAnchor& lower() const { return lower_; }
    const KdeConfig& kde_config() const { return kde_; }

    friend ResidualTailModel fit_residual_density(std::vector<double> residuals,
                                                  const KdeConfig& kde, const TailConfig& tail);

private:
    std::vector<double> residuals_; // sorted ascending
    double b1_ = 0.0;
    double b2_ = 0.0;
    TailAnchor upper_;
    TailAnchor lower_; // fitted on the negated residuals
    KdeConfig kde_;
};

ResidualTailModel fit_residual_density(std::vector<double> residuals, const KdeConfig& kde = {},
                                       const TailConfig& tail = {});

/// Fraction of rows whose density argument q_tau - h(x_i) falls outside the
/// empirical residual range [min R, max R].
double out_of_range_fraction(const Dataset& data, const Predictor& predictor, double tau);

} // namespace uqfi
