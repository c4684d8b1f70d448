#include "uqfi/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <string>

#include "uqfi/errors.hpp"

namespace uqfi {

namespace {

double two_sided_p(double t) { return std::erfc(std::fabs(t) / std::sqrt(2.0)); }

std::vector<double> predictions(const Dataset& data, const Predictor& predictor) {
    std::vector<double> yhat(data.n());
    for (std::size_t i = 0; i < data.n(); ++i) yhat[i] = predictor.predict(data.x.row(i));
    return yhat;
}

// (1/n^2) double sum of 1[R_i' > q_hat - h_i]; exact because the inner counts
// are integers
double survival_double_sum(const std::vector<double>& sorted_residuals,
                           const std::vector<double>& yhat, double q_hat) {
    const std::size_t n = yhat.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double thr = q_hat - yhat[i];
        auto it = std::upper_bound(sorted_residuals.begin(), sorted_residuals.end(), thr);
        total += static_cast<double>(sorted_residuals.end() - it);
    }
    return total / (static_cast<double>(n) * static_cast<double>(n));
}

QuantileTest assemble_test(double q_marginal, const DensityContext& ctx) {
    QuantileTest test;
    test.q_marginal = q_marginal;
    test.q_hat = ctx.q_hat;
    test.variance = ctx.variance;
    test.statistic = (q_marginal - ctx.q_hat) / std::sqrt(ctx.variance);
    test.p_value = two_sided_p(test.statistic);
    return test;
}

void validate_context(const DensityContext& ctx, std::size_t n) {
    if (ctx.sorted_residuals.size() != n)
        throw ValidationError("density context missing or built for a different sample "
                              "(residual count mismatch)");
    if (!(ctx.f_y_at_q > 0.0) || !(ctx.variance > 0.0))
        throw ValidationError("density context missing required density/variance values");
}

} // namespace

DensityContext make_density_context(const Dataset& data, const Predictor& predictor,
                                    double tau, const KdeConfig& kde) {
    if (!(tau > 0.0 && tau < 1.0))
        throw ValidationError("make_density_context: tau must lie in (0,1)");
    const std::size_t n = data.n();
    if (n == 0) throw ValidationError("make_density_context: empty dataset");

    DensityContext ctx;
    ctx.tau = tau;
    ctx.q_hat = empirical_quantile(data.y, tau);
    ctx.f_y_at_q = kde_at(data.y, ctx.q_hat, kde);
    if (!(ctx.f_y_at_q >= 1e-12))
        throw NumericError("make_density_context: ill-conditioned density, f_Y(q_hat)=" +
                           std::to_string(ctx.f_y_at_q));
    ctx.c1 = 1.0 / ctx.f_y_at_q;
    ctx.c2 = ctx.q_hat - ctx.c1 * (1.0 - tau);
    ctx.variance = tau * (1.0 - tau) /
                   (static_cast<double>(n) * ctx.f_y_at_q * ctx.f_y_at_q);

    std::vector<double> yhat = predictions(data, predictor);
    ctx.sorted_residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) ctx.sorted_residuals[i] = data.y[i] - yhat[i];
    std::sort(ctx.sorted_residuals.begin(), ctx.sorted_residuals.end());
    return ctx;
}

double marginal_quantile_full(const Dataset& data, const Predictor& predictor,
                              const DensityContext& ctx) {
    validate_context(ctx, data.n());
    std::vector<double> yhat = predictions(data, predictor);
    double s = survival_double_sum(ctx.sorted_residuals, yhat, ctx.q_hat);
    return ctx.c1 * s + ctx.c2;
}

double marginal_quantile_reduced(const Dataset& data, const Predictor& predictor,
                                 const std::vector<std::size_t>& zeroed,
                                 const DensityContext& ctx) {
    validate_context(ctx, data.n());
    const std::size_t n = data.n();
    const std::size_t p = data.p();
    for (std::size_t j : zeroed)
        if (j >= p) throw ValidationError("marginal_quantile_reduced: feature index out of range");

    std::vector<double> row(p);
    std::vector<double> yhat(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto src = data.x.row(i);
        std::copy(src.begin(), src.end(), row.begin());
        for (std::size_t j : zeroed) row[j] = 0.0;
        yhat[i] = predictor.predict(row);
    }
    double s = survival_double_sum(ctx.sorted_residuals, yhat, ctx.q_hat);
    return ctx.c1 * s + ctx.c2;
}

QuantileTest gof_test(const Dataset& data, const Predictor& predictor,
                      const DensityContext& ctx) {
    return assemble_test(marginal_quantile_full(data, predictor, ctx), ctx);
}

PruneTauResult prune_at_tau(const Dataset& data, const Predictor& predictor,
                            const std::vector<double>& beta_init, double tau,
                            const PruneConfig& cfg, const KdeConfig& kde) {
    const std::size_t p = data.p();
    if (beta_init.size() != p)
        throw ValidationError("prune_at_tau: beta_init length must equal p");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw ValidationError("prune_at_tau: alpha must lie in (0,1)");

    PruneTauResult result;
    std::vector<std::size_t> candidates; // nonzero initial importance, weakest first
    for (std::size_t j = 0; j < p; ++j) {
        if (beta_init[j] == 0.0) result.dropped.push_back(j); // never a candidate
        else candidates.push_back(j);
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(beta_init[a]) < std::fabs(beta_init[b]);
    });

    DensityContext ctx = make_density_context(data, predictor, tau, kde);

    // cumulative zeroing: the reduced model always zeroes everything dropped
    // so far plus the current candidate
    std::vector<std::size_t> zeroed = result.dropped;
    for (std::size_t j : candidates) {
        zeroed.push_back(j);
        double q_reduced = marginal_quantile_reduced(data, predictor, zeroed, ctx);
        EliminationStep step;
        step.feature = j;
        step.test = assemble_test(q_reduced, ctx);
        step.removed = step.test.p_value > cfg.alpha;
        result.trace.push_back(step);
        if (!step.removed) {
            zeroed.pop_back(); // rejection: the feature matters, stop eliminating
            break;
        }
        result.dropped.push_back(j);
    }

    for (std::size_t j = 0; j < p; ++j)
        if (std::find(result.dropped.begin(), result.dropped.end(), j) == result.dropped.end())
            result.kept.push_back(j);
    std::sort(result.dropped.begin(), result.dropped.end());
    return result;
}

PruningReport prune_multi(const Dataset& data, const Predictor& predictor,
                          ImportanceCurve& curve, const PruneConfig& cfg,
                          const KdeConfig& kde) {
    if (curve.pruned) throw ValidationError("prune_multi: curve is already pruned");
    const std::size_t p = data.p();
    if (curve.p() != p) throw ValidationError("prune_multi: curve/dataset feature mismatch");

    PruningReport report;
    report.alpha = cfg.alpha;

    std::vector<std::size_t> intersection; // of per-tau dropped sets
    bool first = true;
    for (std::size_t k = 0; k < curve.k(); ++k) {
        TauPruneRecord rec;
        rec.tau = curve.taus[k];

        DensityContext ctx = make_density_context(data, predictor, rec.tau, kde);
        rec.gof = gof_test(data, predictor, ctx);
        rec.gof_passed = rec.gof.p_value > cfg.alpha;

        if (rec.gof_passed) {
            std::vector<double> beta_init(p);
            for (std::size_t j = 0; j < p; ++j) beta_init[j] = curve.beta(k, j);
            PruneTauResult res = prune_at_tau(data, predictor, beta_init, rec.tau, cfg, kde);
            rec.trace = std::move(res.trace);
            rec.kept = std::move(res.kept);
            rec.dropped = std::move(res.dropped);
        } else {
            // fit rejected: leave this tau untouched
            rec.kept.resize(p);
            std::iota(rec.kept.begin(), rec.kept.end(), std::size_t{0});
        }

        if (first) {
            intersection = rec.dropped;
            first = false;
        } else {
            std::vector<std::size_t> next;
            std::set_intersection(intersection.begin(), intersection.end(),
                                  rec.dropped.begin(), rec.dropped.end(),
                                  std::back_inserter(next));
            intersection = std::move(next);
        }
        report.per_tau.push_back(std::move(rec));
    }

    report.dropped = intersection;
    for (std::size_t j = 0; j < p; ++j)
        if (!std::binary_search(report.dropped.begin(), report.dropped.end(), j))
            report.kept.push_back(j);

    for (std::size_t j : report.dropped)
        for (std::size_t k = 0; k < curve.k(); ++k) curve.beta(k, j) = 0.0;
    curve.pruned = true;
    curve.kept_set = report.kept;
    return report;
}

double prun_metric(const std::vector<std::size_t>& init_nonzeros,
                   const std::vector<std::size_t>& final_nonzeros,
                   std::size_t p, std::size_t reps) {
    if (reps == 0 || p < 3)
        throw ValidationError("prun_metric: needs reps >= 1 and p >= 3");
    if (init_nonzeros.size() != reps || final_nonzeros.size() != reps)
        throw ValidationError("prun_metric: count vectors must have one entry per replication");

    double total = 0.0;
    for (std::size_t r = 0; r < reps; ++r)
        total += static_cast<double>(init_nonzeros[r]) - static_cast<double>(final_nonzeros[r]);
    if (total < 0.0)
        std::cerr << "warning: prun metric is negative (more nonzeros after pruning)\n";
    return 100.0 * total / (static_cast<double>(reps) * static_cast<double>(p - 2));
}

} // namespace uqfi
