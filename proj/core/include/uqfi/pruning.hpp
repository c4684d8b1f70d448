#pragma once

#include <cstddef>
#include <vector>

#include "uqfi/dataset.hpp"
#include "uqfi/density.hpp"
#include "uqfi/importance.hpp"
#include "uqfi/predictor.hpp"

namespace uqfi {

struct PruneConfig {
    double alpha = 0.05;   // significance level for gate and per-feature tests
    QuantileGrid grid{};   // used by drivers that build the curve themselves
};

/// One marginal-quantile test: either the goodness-of-fit comparison of the
/// full model or a per-feature comparison of a reduced model.
struct QuantileTest {
    double statistic = 0.0;       // T
    double p_value = 1.0;         // 2 * (1 - Phi(|T|))
    double q_marginal = 0.0;      // q_full or q_reduced
    double q_hat = 0.0;           // empirical outcome quantile
    double variance = 0.0;        // V_n(tau)
};

/// Everything the marginal-quantile estimators need at one tau, fitted once
/// and reused across every reduced-model evaluation.
struct DensityContext {
    double tau = 0.0;
    double q_hat = 0.0;
    double f_y_at_q = 0.0;
    double c1 = 0.0;                       // 1 / f_y_at_q
    double c2 = 0.0;                       // q_hat - c1 * (1 - tau)
    double variance = 0.0;                 // tau(1-tau) / (n * f_y_at_q^2)
    std::vector<double> sorted_residuals;  // y - h(x), ascending
};

struct EliminationStep {
    std::size_t feature = 0;
    QuantileTest test;
    bool removed = false;
};

struct TauPruneRecord {
    double tau = 0.0;
    QuantileTest gof;
    bool gof_passed = false;                // p > alpha: fit accepted, pruning ran
    std::vector<EliminationStep> trace;
    std::vector<std::size_t> kept;          // S_tau
    std::vector<std::size_t> dropped;       // S^c_tau (empty when the gate fails)
};

struct PruningReport {
    double alpha = 0.05;
    std::vector<TauPruneRecord> per_tau;
    std::vector<std::size_t> kept;     // final: complement of the intersection
    std::vector<std::size_t> dropped;  // final: intersection of per-tau drops
};

DensityContext make_density_context(const Dataset& data, const Predictor& predictor,
                                    double tau, const KdeConfig& kde = {});

/// Marginal quantile implied by the full model:
/// q_full = c1 * (1/n^2) sum_i sum_i' 1[R_i' > q_hat - h(x_i)] + c2.
/// O(n log n) via the sorted residuals in the context.
double marginal_quantile_full(const Dataset& data, const Predictor& predictor,
                              const DensityContext& ctx);

/// Same statistic with the listed feature columns replaced by 0 before
/// prediction.  Needs a predictor that can evaluate modified rows.
double marginal_quantile_reduced(const Dataset& data, const Predictor& predictor,
                                 const std::vector<std::size_t>& zeroed,
                                 const DensityContext& ctx);

/// Goodness-of-fit: T = (q_full - q_hat) / sqrt(V), two-sided normal p-value.
QuantileTest gof_test(const Dataset& data, const Predictor& predictor,
                      const DensityContext& ctx);

struct PruneTauResult {
    std::vector<EliminationStep> trace;
    std::vector<std::size_t> kept;
    std::vector<std::size_t> dropped;
};

/// Backward elimination at one tau (the caller has already accepted the fit):
/// features with exactly zero initial importance are dropped outright; the
/// rest are tested weakest-first with cumulative zeroing, removed while the
/// reduced model keeps p > alpha, stopping at the first rejection.
PruneTauResult prune_at_tau(const Dataset& data, const Predictor& predictor,
                            const std::vector<double>& beta_init, double tau,
                            const PruneConfig& cfg, const KdeConfig& kde = {});

/// Full pipeline over the curve's grid: per-tau gate + elimination, final
/// drop set = intersection across taus, dropped coefficients zeroed bitwise.
PruningReport prune_multi(const Dataset& data, const Predictor& predictor,
                          ImportanceCurve& curve, const PruneConfig& cfg,
                          const KdeConfig& kde = {});

/// Average percentage of near-zero features (j >= 3, i.e. beyond the first
/// two) removed per replication: 100 * sum(init - final) / (R * (p - 2)).
/// Counts must already be restricted to features j >= 3.
double prun_metric(const std::vector<std::size_t>& init_nonzeros,
                   const std::vector<std::size_t>& final_nonzeros,
                   std::size_t p, std::size_t reps);

} // namespace uqfi
