#pragma once

#include <cstdint>
#include <vector>

#include "uqfi/dataset.hpp"
#include "uqfi/density.hpp"
#include "uqfi/predictor.hpp"

namespace uqfi {

/// Feature-importance curve across outcome quantiles: beta(k, j) is the
/// estimated effect of feature j on the tau_k quantile of the outcome.
struct ImportanceCurve {
    std::vector<double> taus;        // K grid points
    Matrix beta;                     // K x p
    std::vector<double> q_hat;       // empirical quantiles, length K
    std::vector<double> f_y_at_q;    // outcome density at each quantile, length K
    bool pruned = false;
    std::vector<std::size_t> kept_set; // features surviving pruning (all, if !pruned)

    std::size_t k() const { return taus.size(); }
    std::size_t p() const { return beta.cols(); }
};

struct ImportanceOptions {
    KdeConfig kde{};
    TailConfig tail{};
    int threads = 1; // <= 0 resolves to hardware concurrency
};

/// Plug-in estimator: for each grid point,
///   beta_j(tau) = (1/n) sum_i f_R(q_hat - h(x_i)) / f_Y(q_hat) * dh/dx_j(x_i),
/// with f_R the extrapolated residual density and f_Y a kernel estimate of
/// the outcome density.  Bitwise thread-count invariant: observations are
/// processed in fixed-size chunks and chunk subtotals are folded with a
/// pairwise tree in chunk order.
ImportanceCurve estimate_importance(const Dataset& data, const Predictor& predictor,
                                    const QuantileGrid& grid,
                                    const ImportanceOptions& options = {});

/// Influence of one observation on the tau-quantile:
/// (tau - 1[y <= q_tau]) / f_y_at_q.
double influence_function(double y, double q_tau, double tau, double f_y_at_q);

/// Brute-force Monte Carlo check of the importance value: shift feature j by
/// +/- t, rebuild counterfactual outcomes through the predictor with
/// independently permuted residuals, and differentiate the empirical
/// quantile.  Requires a predictor that can evaluate unseen rows.
double shift_oracle(const Dataset& data, const Predictor& predictor, double tau,
                    std::size_t j, double t, std::size_t mc,
                    std::uint64_t seed = 0);

} // namespace uqfi
