#include "uqfi/importance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "uqfi/errors.hpp"
#include "uqfi/parallel.hpp"
#include "uqfi/rng.hpp"

namespace uqfi {

namespace {

constexpr std::size_t kChunk = 1024; // fixed so results ignore the worker count

void require_finite_inputs(const Dataset& data) {
    for (double v : data.y)
        if (!std::isfinite(v)) throw ValidationError("estimate_importance: non-finite outcome");
    for (double v : data.x.data())
        if (!std::isfinite(v)) throw ValidationError("estimate_importance: non-finite feature");
}

} // namespace

ImportanceCurve estimate_importance(const Dataset& data, const Predictor& predictor,
                                    const QuantileGrid& grid,
                                    const ImportanceOptions& options) {
    grid.validate();
    const std::size_t n = data.n();
    const std::size_t p = data.p();
    if (n < 30)
        throw ValidationError("estimate_importance: need n >= 30, got " + std::to_string(n));
    if (predictor.n_features() != p)
        throw ValidationError("estimate_importance: predictor expects " +
                              std::to_string(predictor.n_features()) +
                              " features, dataset has " + std::to_string(p));
    require_finite_inputs(data);

    const int workers = resolve_threads(options.threads);

    // model evaluations (each chunk writes a disjoint slice)
    std::vector<double> yhat(n);
    Matrix grads(n, p);
    for_chunks(n, kChunk, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
            auto row = data.x.row(i);
            yhat[i] = predictor.predict(row);
            predictor.gradient(row, grads.row(i));
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(yhat[i]))
            throw NumericError("estimate_importance: predictor returned a non-finite value");
    for (double g : grads.data())
        if (!std::isfinite(g))
            throw NumericError("estimate_importance: predictor returned a non-finite gradient");

    std::vector<double> residuals(n);
    for (std::size_t i = 0; i < n; ++i) residuals[i] = data.y[i] - yhat[i];

    ResidualTailModel density = fit_residual_density(residuals, options.kde, options.tail);

    const std::size_t k = grid.size();
    ImportanceCurve curve;
    curve.taus = grid.taus;
    curve.beta = Matrix(k, p);
    curve.q_hat.resize(k);
    curve.f_y_at_q.resize(k);
    curve.kept_set.resize(p);
    std::iota(curve.kept_set.begin(), curve.kept_set.end(), std::size_t{0});

    const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> chunk_partials(n_chunks * p);
    std::vector<double> fold(n_chunks);

    for (std::size_t kk = 0; kk < k; ++kk) {
        const double tau = grid.taus[kk];
        const double q = empirical_quantile(data.y, tau);
        const double f_y = kde_at(data.y, q, options.kde);
        if (!(f_y >= 1e-12))
            throw NumericError("estimate_importance: ill-conditioned density, f_Y(q_hat)=" +
                               std::to_string(f_y) + " at tau=" + std::to_string(tau));
        curve.q_hat[kk] = q;
        curve.f_y_at_q[kk] = f_y;

        std::fill(chunk_partials.begin(), chunk_partials.end(), 0.0);
        for_chunks(n, kChunk, workers, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
            double* partial = chunk_partials.data() + chunk * p;
            for (std::size_t i = begin; i < end; ++i) {
                double w = density(q - yhat[i]) / f_y;
                if (w == 0.0) continue;
                auto g = grads.row(i);
                for (std::size_t j = 0; j < p; ++j) partial[j] += w * g[j];
            }
        });

        for (std::size_t j = 0; j < p; ++j) {
            for (std::size_t c = 0; c < n_chunks; ++c) fold[c] = chunk_partials[c * p + j];
            curve.beta(kk, j) = pairwise_sum(fold.data(), n_chunks) / static_cast<double>(n);
        }
    }
    return curve;
}

double influence_function(double y, double q_tau, double tau, double f_y_at_q) {
    if (!(f_y_at_q > 0.0))
        throw ValidationError("influence_function: density at the quantile must be positive");
    double indicator = y <= q_tau ? 1.0 : 0.0;
    return (tau - indicator) / f_y_at_q;
}

double shift_oracle(const Dataset& data, const Predictor& predictor, double tau,
                    std::size_t j, double t, std::size_t mc, std::uint64_t seed) {
    const std::size_t n = data.n();
    const std::size_t p = data.p();
    if (n == 0) throw ValidationError("shift_oracle: empty dataset");
    if (j >= p) throw ValidationError("shift_oracle: feature index out of range");
    if (t == 0.0) throw ValidationError("shift_oracle: step t must be nonzero");
    if (mc < n) throw ValidationError("shift_oracle: need at least n Monte Carlo draws");
    if (!(tau > 0.0 && tau < 1.0)) throw ValidationError("shift_oracle: tau must lie in (0,1)");
    if (predictor.n_features() != p)
        throw ValidationError("shift_oracle: predictor feature count mismatch");
    if (!predictor.supports_counterfactual_rows())
        throw ValidationError("shift_oracle: unsupported predictor; it cannot evaluate "
                              "counterfactual rows (needs a live model, not stored predictions)");

    std::vector<double> residuals(n);
    std::vector<double> h_plus(n), h_minus(n);
    std::vector<double> shifted(p);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = data.x.row(i);
        double h = predictor.predict(row);
        residuals[i] = data.y[i] - h;
        std::copy(row.begin(), row.end(), shifted.begin());
        shifted[j] = row[j] + t;
        h_plus[i] = predictor.predict(shifted);
        shifted[j] = row[j] - t;
        h_minus[i] = predictor.predict(shifted);
    }

    // mc total counterfactual outcomes from ceil(mc/n) permutation blocks; the
    // residual is permuted independently of the row so R stays independent of X
    const std::size_t blocks = (mc + n - 1) / n;
    std::vector<double> y_plus(blocks * n), y_minus(blocks * n);
    std::vector<std::size_t> perm(n);
    for (std::size_t b = 0; b < blocks; ++b) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        Rng rng(Rng::derive(seed, 0x73686674u + b)); // one stream per block
        for (std::size_t i = n; i > 1; --i) {
            std::size_t swap_with = static_cast<std::size_t>(rng.next_u64() % i);
            std::swap(perm[i - 1], perm[swap_with]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            y_plus[b * n + i] = h_plus[i] + residuals[perm[i]];
            y_minus[b * n + i] = h_minus[i] + residuals[perm[i]];
        }
    }

    double q_plus = empirical_quantile(y_plus, tau);
    double q_minus = empirical_quantile(y_minus, tau);
    return (q_plus - q_minus) / (2.0 * t);
}

} // namespace uqfi
