#include "uqfi/fitters.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <unordered_map>

#include "uqfi/errors.hpp"
#include "uqfi/rng.hpp"

namespace uqfi {

namespace {

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// ---------------------------------------------------------------------------
// polynomial basis shared by the least-squares and MCP fitters
// ---------------------------------------------------------------------------

struct BasisTerm {
    std::size_t a = 0;
    std::size_t b = SIZE_MAX;   // SIZE_MAX marks a main-effect term
    int u = 1;
    int v = 0;

    bool is_interaction() const { return b != SIZE_MAX; }
};

class PolyBasis {
public:
    PolyBasis() = default;

    PolyBasis(const Dataset& data, const BasisConfig& config) {
        if (config.degree < 1)
            throw ValidationError("basis degree must be >= 1, got " +
                                  std::to_string(config.degree));
        const std::size_t p = data.p();
        for (auto [a, b] : config.interactions) {
            if (a >= p || b >= p)
                throw ValidationError("interaction pair references feature beyond p");
            if (a == b)
                throw ValidationError("interaction pair must use two distinct features");
        }

        mu_.assign(p, 0.0);
        sigma_.assign(p, 1.0);
        if (config.standardize) {
            const std::size_t n = data.n();
            if (n < 2) throw ValidationError("cannot standardize with n < 2");
            for (std::size_t j = 0; j < p; ++j) {
                double m = 0.0;
                for (std::size_t i = 0; i < n; ++i) m += data.x(i, j);
                m /= static_cast<double>(n);
                double ss = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    double d = data.x(i, j) - m;
                    ss += d * d;
                }
                double s = std::sqrt(ss / static_cast<double>(n - 1));
                mu_[j] = m;
                sigma_[j] = s > 0.0 ? s : 1.0; // constant columns pass through
            }
        }

        for (std::size_t j = 0; j < p; ++j)
            for (int d = 1; d <= config.degree; ++d)
                terms_.push_back(BasisTerm{j, SIZE_MAX, d, 0});
        for (auto [a, b] : config.interactions)
            for (int u = 1; u <= config.degree; ++u)
                for (int v = 1; v <= config.degree; ++v)
                    terms_.push_back(BasisTerm{a, b, u, v});
    }

    std::size_t size() const { return terms_.size(); }
    std::size_t n_features() const { return mu_.size(); }
    const std::vector<BasisTerm>& terms() const { return terms_; }

    void expand(std::span<const double> row, std::span<double> out) const {
        for (std::size_t t = 0; t < terms_.size(); ++t) {
            const auto& bt = terms_[t];
            double za = (row[bt.a] - mu_[bt.a]) / sigma_[bt.a];
            double val = ipow(za, bt.u);
            if (bt.is_interaction()) {
                double zb = (row[bt.b] - mu_[bt.b]) / sigma_[bt.b];
                val *= ipow(zb, bt.v);
            }
            out[t] = val;
        }
    }

    /// Accumulate coef * d(term)/dx into the gradient.
    void add_gradient(std::span<const double> row, std::span<const double> coef,
                      std::span<double> grad) const {
        for (std::size_t t = 0; t < terms_.size(); ++t) {
            double c = coef[t];
            if (c == 0.0) continue; // pruned-out basis groups contribute exactly zero
            const auto& bt = terms_[t];
            double za = (row[bt.a] - mu_[bt.a]) / sigma_[bt.a];
            if (!bt.is_interaction()) {
                grad[bt.a] += c * bt.u * ipow(za, bt.u - 1) / sigma_[bt.a];
            } else {
                double zb = (row[bt.b] - mu_[bt.b]) / sigma_[bt.b];
                grad[bt.a] += c * bt.u * ipow(za, bt.u - 1) * ipow(zb, bt.v) / sigma_[bt.a];
                grad[bt.b] += c * bt.v * ipow(za, bt.u) * ipow(zb, bt.v - 1) / sigma_[bt.b];
            }
        }
    }

private:
    std::vector<BasisTerm> terms_;
    std::vector<double> mu_;
    std::vector<double> sigma_;
};

// ---------------------------------------------------------------------------
// predictors
// ---------------------------------------------------------------------------

class OlsPredictor final : public Predictor {
public:
    OlsPredictor(std::vector<double> coef, std::size_t p)
        : coef_(std::move(coef)), p_(p), descriptor_("ols") {}

    double predict(std::span<const double> row) const override {
        double s = coef_[0];
        for (std::size_t j = 0; j < p_; ++j) s += coef_[j + 1] * row[j];
        return s;
    }

    void gradient(std::span<const double>, std::span<double> out) const override {
        for (std::size_t j = 0; j < p_; ++j) out[j] = coef_[j + 1];
    }

    std::size_t n_features() const override { return p_; }
    const std::string& descriptor() const override { return descriptor_; }

    const std::vector<double>& coefficients() const { return coef_; }

private:
    std::vector<double> coef_; // intercept first
    std::size_t p_;
    std::string descriptor_;
};

class BasisPredictor final : public Predictor {
public:
    BasisPredictor(PolyBasis basis, double intercept, std::vector<double> coef,
                   std::string descriptor)
        : basis_(std::move(basis)), intercept_(intercept), coef_(std::move(coef)),
          descriptor_(std::move(descriptor)) {}

    double predict(std::span<const double> row) const override {
        std::vector<double> terms(basis_.size());
        basis_.expand(row, terms);
        double s = intercept_;
        for (std::size_t t = 0; t < terms.size(); ++t) s += coef_[t] * terms[t];
        return s;
    }

    void gradient(std::span<const double> row, std::span<double> out) const override {
        std::fill(out.begin(), out.end(), 0.0);
        basis_.add_gradient(row, coef_, out);
    }

    std::size_t n_features() const override { return basis_.n_features(); }
    const std::string& descriptor() const override { return descriptor_; }

private:
    PolyBasis basis_;
    double intercept_;
    std::vector<double> coef_;
    std::string descriptor_;
};

class ExternalPredictor final : public Predictor {
public:
    ExternalPredictor(const Dataset& data, ExternalPredictions preds)
        : x_(data.x), yhat_(std::move(preds.yhat)), grad_(std::move(preds.gradients)),
          descriptor_("external") {
        index_.reserve(x_.rows());
        for (std::size_t i = 0; i < x_.rows(); ++i)
            index_.emplace(row_hash(x_.row(i)), i);
    }

    double predict(std::span<const double> row) const override { return yhat_[lookup(row)]; }

    void gradient(std::span<const double> row, std::span<double> out) const override {
        auto g = grad_.row(lookup(row));
        std::copy(g.begin(), g.end(), out.begin());
    }

    std::size_t n_features() const override { return x_.cols(); }
    const std::string& descriptor() const override { return descriptor_; }
    bool supports_counterfactual_rows() const override { return false; }

private:
    static std::uint64_t row_hash(std::span<const double> row) {
        std::uint64_t h = 0xcbf29ce484222325ull; // FNV-1a over the bit patterns
        for (double d : row) {
            if (d == 0.0) d = 0.0; // fold -0.0 onto 0.0
            std::uint64_t bits;
            std::memcpy(&bits, &d, sizeof(bits));
            for (int k = 0; k < 8; ++k) {
                h ^= (bits >> (8 * k)) & 0xff;
                h *= 0x100000001b3ull;
            }
        }
        return h;
    }

    std::size_t lookup(std::span<const double> row) const {
        auto [lo, hi] = index_.equal_range(row_hash(row));
        for (auto it = lo; it != hi; ++it) {
            auto cand = x_.row(it->second);
            if (std::equal(cand.begin(), cand.end(), row.begin(), row.end())) return it->second;
        }
        throw ValidationError("external predictor cannot evaluate counterfactual rows; "
                              "it only serves the rows it was fit on");
    }

    Matrix x_;
    std::vector<double> yhat_;
    Matrix grad_;
    std::string descriptor_;
    std::unordered_multimap<std::uint64_t, std::size_t> index_;
};

void validate_training_data(const Dataset& data, const char* who) {
    if (data.n() == 0 || data.p() == 0)
        throw ValidationError(std::string(who) + ": empty dataset");
    if (data.x.rows() != data.y.size())
        throw ValidationError(std::string(who) + ": feature rows and outcomes disagree");
    for (double v : data.y)
        if (!std::isfinite(v)) throw ValidationError(std::string(who) + ": non-finite outcome");
    for (double v : data.x.data())
        if (!std::isfinite(v)) throw ValidationError(std::string(who) + ": non-finite feature");
}

} // namespace

// ---------------------------------------------------------------------------
// OLS
// ---------------------------------------------------------------------------

PredictorPtr fit_ols(const Dataset& data) {
    validate_training_data(data, "fit_ols");
    const std::size_t n = data.n();
    const std::size_t p = data.p();
    if (n < p + 1)
        throw ValidationError("fit_ols: need n >= p + 1 rows, got n=" + std::to_string(n));

    Eigen::MatrixXd design(n, p + 1);
    design.col(0).setOnes();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) design(i, j + 1) = data.x(i, j);

    Eigen::Map<const Eigen::VectorXd> y(data.y.data(), n);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < static_cast<Eigen::Index>(p + 1))
        throw NumericError("fit_ols: singular design matrix (rank " +
                           std::to_string(qr.rank()) + " < " + std::to_string(p + 1) + ")");

    Eigen::VectorXd beta = qr.solve(y);
    return std::make_unique<OlsPredictor>(
        std::vector<double>(beta.data(), beta.data() + beta.size()), p);
}

// ---------------------------------------------------------------------------
// additive polynomial least squares
// ---------------------------------------------------------------------------

PredictorPtr fit_additive_poly(const Dataset& data, const BasisConfig& config) {
    validate_training_data(data, "fit_additive_poly");
    PolyBasis basis(data, config);
    const std::size_t n = data.n();
    const std::size_t d = basis.size();
    if (n < d + 1)
        throw NumericError("fit_additive_poly: basis has " + std::to_string(d) +
                           " terms but only " + std::to_string(n) +
                           " rows; use the regularized MCP fitter instead");

    Eigen::MatrixXd design(n, d + 1);
    design.col(0).setOnes();
    std::vector<double> terms(d);
    for (std::size_t i = 0; i < n; ++i) {
        basis.expand(data.x.row(i), terms);
        for (std::size_t t = 0; t < d; ++t) design(i, t + 1) = terms[t];
    }

    Eigen::Map<const Eigen::VectorXd> y(data.y.data(), n);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < static_cast<Eigen::Index>(d + 1))
        throw NumericError("fit_additive_poly: rank-deficient basis (rank " +
                           std::to_string(qr.rank()) + " < " + std::to_string(d + 1) +
                           "); use the regularized MCP fitter instead");

    Eigen::VectorXd sol = qr.solve(y);
    std::string desc = "additive_poly(degree=" + std::to_string(config.degree) +
                       ", interactions=" + std::to_string(config.interactions.size()) + ")";
    return std::make_unique<BasisPredictor>(
        std::move(basis), sol[0], std::vector<double>(sol.data() + 1, sol.data() + 1 + d),
        std::move(desc));
}

// ---------------------------------------------------------------------------
// MCP coordinate descent
// ---------------------------------------------------------------------------

namespace {

struct McpPath {
    std::vector<double> lambdas;
    // coefficients on the internally standardized basis-column scale,
    // one vector per lambda
    std::vector<std::vector<double>> beta;
    std::vector<double> rss;
    std::vector<std::size_t> nonzero;
};

struct StandardizedDesign {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> cols;     // column-major, centered, (1/n) sum x^2 = 1
    std::vector<double> center;
    std::vector<double> scale;    // 0 marks a constant column (excluded)
    std::vector<double> y;        // centered outcome
    double y_mean = 0.0;

    const double* col(std::size_t t) const { return cols.data() + t * n; }
};

StandardizedDesign standardize_design(const Dataset& data, const PolyBasis& basis) {
    StandardizedDesign sd;
    sd.n = data.n();
    sd.d = basis.size();
    sd.cols.assign(sd.n * sd.d, 0.0);
    sd.center.assign(sd.d, 0.0);
    sd.scale.assign(sd.d, 0.0);

    std::vector<double> terms(sd.d);
    for (std::size_t i = 0; i < sd.n; ++i) {
        basis.expand(data.x.row(i), terms);
        for (std::size_t t = 0; t < sd.d; ++t) sd.cols[t * sd.n + i] = terms[t];
    }
    const double dn = static_cast<double>(sd.n);
    for (std::size_t t = 0; t < sd.d; ++t) {
        double* c = sd.cols.data() + t * sd.n;
        double m = 0.0;
        for (std::size_t i = 0; i < sd.n; ++i) m += c[i];
        m /= dn;
        double ss = 0.0;
        for (std::size_t i = 0; i < sd.n; ++i) {
            c[i] -= m;
            ss += c[i] * c[i];
        }
        double s = std::sqrt(ss / dn);
        sd.center[t] = m;
        sd.scale[t] = s;
        if (s > 0.0)
            for (std::size_t i = 0; i < sd.n; ++i) c[i] /= s;
    }

    sd.y.assign(data.y.begin(), data.y.end());
    double ym = 0.0;
    for (double v : sd.y) ym += v;
    ym /= dn;
    for (double& v : sd.y) v -= ym;
    sd.y_mean = ym;
    return sd;
}

double soft_threshold(double z, double lambda) {
    if (z > lambda) return z - lambda;
    if (z < -lambda) return z + lambda;
    return 0.0;
}

// One-dimensional MCP update for a standardized column ((1/n) sum x^2 = 1).
double mcp_update(double z, double lambda, double gamma) {
    if (std::fabs(z) <= gamma * lambda)
        return soft_threshold(z, lambda) / (1.0 - 1.0 / gamma);
    return z;
}

double mcp_penalty(double b, double lambda, double gamma) {
    double a = std::fabs(b);
    if (a <= gamma * lambda) return lambda * a - b * b / (2.0 * gamma);
    return 0.5 * gamma * lambda * lambda;
}

double mcp_objective(const StandardizedDesign& sd, const std::vector<double>& r,
                     const std::vector<double>& beta, double lambda, double gamma) {
    double rss = 0.0;
    for (double v : r) rss += v * v;
    double obj = rss / (2.0 * static_cast<double>(sd.n));
    for (std::size_t t = 0; t < sd.d; ++t)
        if (sd.scale[t] > 0.0) obj += mcp_penalty(beta[t], lambda, gamma);
    return obj;
}

// Coordinate descent at one lambda, warm-started from beta/r.  Returns the
// number of sweeps used; throws on non-convergence.
std::size_t mcp_descend(const StandardizedDesign& sd, double lambda, double gamma,
                        std::size_t max_iter, double tol, std::vector<double>& beta,
                        std::vector<double>& r, std::vector<double>* objective_trace) {
    const double dn = static_cast<double>(sd.n);
    double last_obj = std::numeric_limits<double>::infinity();

    auto sweep = [&](bool active_only) {
        double max_change = 0.0;
        for (std::size_t t = 0; t < sd.d; ++t) {
            if (sd.scale[t] == 0.0) continue;
            if (active_only && beta[t] == 0.0) continue;
            const double* x = sd.col(t);
            double inner = 0.0;
            for (std::size_t i = 0; i < sd.n; ++i) inner += x[i] * r[i];
            double z = inner / dn + beta[t];
            double b_new = mcp_update(z, lambda, gamma);
            double diff = beta[t] - b_new;
            if (diff != 0.0) {
                for (std::size_t i = 0; i < sd.n; ++i) r[i] += x[i] * diff;
                beta[t] = b_new;
                max_change = std::max(max_change, std::fabs(diff));
            }
        }
        return max_change;
    };

    for (std::size_t it = 0; it < max_iter; ++it) {
        bool full = (it % 8 == 0); // periodic full sweep catches new actives
        double change = sweep(!full);
        if (objective_trace) {
            double obj = mcp_objective(sd, r, beta, lambda, gamma);
            // The single-coordinate minimizers make each sweep non-increasing;
            // this guards the implementation, not the data.
            if (obj > last_obj + 1e-9 * std::max(1.0, std::fabs(last_obj)))
                throw NumericError("mcp objective increased across a sweep");
            last_obj = obj;
            objective_trace->push_back(obj);
        }
        if (change < tol) {
            if (full) return it + 1;
            // converged on the active set; verify against all coordinates
            double full_change = sweep(false);
            if (objective_trace)
                objective_trace->push_back(mcp_objective(sd, r, beta, lambda, gamma));
            if (full_change < tol) return it + 2;
        }
    }
    double obj = mcp_objective(sd, r, beta, lambda, gamma);
    throw NumericError("fit_mcp_additive: coordinate descent did not converge within " +
                       std::to_string(max_iter) + " sweeps (objective=" +
                       std::to_string(obj) + ", lambda=" + std::to_string(lambda) + ")");
}

McpPath mcp_fit_path(const StandardizedDesign& sd, const McpConfig& config,
                     const std::vector<double>& lambdas,
                     std::vector<double>* objective_trace) {
    McpPath path;
    path.lambdas = lambdas;
    std::vector<double> beta(sd.d, 0.0);
    std::vector<double> r = sd.y;

    for (double lambda : lambdas) {
        mcp_descend(sd, lambda, config.gamma, config.max_iter, config.tol, beta, r,
                    objective_trace);
        double rss = 0.0;
        for (double v : r) rss += v * v;
        std::size_t nz = 0;
        for (std::size_t t = 0; t < sd.d; ++t)
            if (beta[t] != 0.0) ++nz;
        path.beta.push_back(beta);
        path.rss.push_back(rss);
        path.nonzero.push_back(nz);
    }
    return path;
}

std::vector<double> make_lambda_grid(const StandardizedDesign& sd, const McpConfig& config) {
    double lambda_max = 0.0;
    const double dn = static_cast<double>(sd.n);
    for (std::size_t t = 0; t < sd.d; ++t) {
        if (sd.scale[t] == 0.0) continue;
        const double* x = sd.col(t);
        double inner = 0.0;
        for (std::size_t i = 0; i < sd.n; ++i) inner += x[i] * sd.y[i];
        lambda_max = std::max(lambda_max, std::fabs(inner / dn));
    }
    if (lambda_max <= 0.0) lambda_max = 1.0; // constant outcome: any grid works

    double ratio = config.lambda_min_ratio;
    if (ratio <= 0.0) ratio = sd.d >= sd.n ? 0.05 : 0.001;
    std::size_t m = std::max<std::size_t>(config.n_lambda, 2);
    std::vector<double> lambdas(m);
    const double log_max = std::log(lambda_max);
    const double log_min = std::log(lambda_max * ratio);
    for (std::size_t k = 0; k < m; ++k) {
        double f = static_cast<double>(k) / static_cast<double>(m - 1);
        lambdas[k] = std::exp(log_max + f * (log_min - log_max));
    }
    return lambdas;
}

std::size_t select_by_bic(const StandardizedDesign& sd, const McpPath& path) {
    const double dn = static_cast<double>(sd.n);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < path.lambdas.size(); ++k) {
        double rss = std::max(path.rss[k], 1e-300);
        double df = static_cast<double>(path.nonzero[k] + 1);
        double bic = dn * std::log(rss / dn) + df * std::log(dn);
        if (bic < best) {
            best = bic;
            best_k = k;
        }
    }
    return best_k;
}

std::size_t select_by_cv(const Dataset& data, const PolyBasis& basis, const McpConfig& config,
                         const std::vector<double>& lambdas) {
    const std::size_t n = data.n();
    const std::size_t k_folds = std::max<std::size_t>(config.cv_folds, 2);
    if (n < k_folds) throw ValidationError("fit_mcp_additive: fewer rows than CV folds");

    // deterministic shuffled fold assignment
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(Rng::derive(config.cv_seed, 0x6376)); // "cv" stream
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
        std::swap(order[i - 1], order[j]);
    }

    std::vector<double> cv_err(lambdas.size(), 0.0);
    std::vector<double> terms(basis.size());
    for (std::size_t fold = 0; fold < k_folds; ++fold) {
        Dataset train;
        std::vector<std::size_t> val_rows;
        std::vector<std::size_t> train_rows;
        for (std::size_t i = 0; i < n; ++i) {
            if (i % k_folds == fold) val_rows.push_back(order[i]);
            else train_rows.push_back(order[i]);
        }
        train.x = Matrix(train_rows.size(), data.p());
        train.y.resize(train_rows.size());
        for (std::size_t r = 0; r < train_rows.size(); ++r) {
            auto src = data.x.row(train_rows[r]);
            std::copy(src.begin(), src.end(), train.x.row(r).begin());
            train.y[r] = data.y[train_rows[r]];
        }

        StandardizedDesign sd = standardize_design(train, basis);
        McpPath path = mcp_fit_path(sd, config, lambdas, nullptr);

        for (std::size_t k = 0; k < lambdas.size(); ++k) {
            // fold-model prediction for held-out rows
            for (std::size_t row : val_rows) {
                basis.expand(data.x.row(row), terms);
                double pred = sd.y_mean;
                for (std::size_t t = 0; t < sd.d; ++t) {
                    if (sd.scale[t] == 0.0 || path.beta[k][t] == 0.0) continue;
                    pred += path.beta[k][t] * (terms[t] - sd.center[t]) / sd.scale[t];
                }
                double e = data.y[row] - pred;
                cv_err[k] += e * e;
            }
        }
    }
    return static_cast<std::size_t>(
        std::min_element(cv_err.begin(), cv_err.end()) - cv_err.begin());
}

} // namespace

PredictorPtr fit_mcp_additive(const Dataset& data, const McpConfig& config,
                              McpDiagnostics* diagnostics) {
    validate_training_data(data, "fit_mcp_additive");
    if (config.gamma <= 1.0)
        throw ValidationError("fit_mcp_additive: gamma must exceed 1");
    PolyBasis basis(data, config.basis);

    StandardizedDesign sd = standardize_design(data, basis);
    std::vector<double> lambdas = make_lambda_grid(sd, config);

    McpPath path = mcp_fit_path(sd, config, lambdas,
                                diagnostics ? &diagnostics->objective_trace : nullptr);
    std::size_t chosen;
    switch (config.selector) {
        case McpConfig::Selector::KFoldCv: chosen = select_by_cv(data, basis, config, lambdas); break;
        case McpConfig::Selector::PathEnd: chosen = lambdas.size() - 1; break;
        default: chosen = select_by_bic(sd, path); break;
    }
    if (diagnostics) {
        diagnostics->lambda_path = lambdas;
        diagnostics->selected_index = chosen;
        diagnostics->nonzero_path = path.nonzero;
    }

    // map back from the standardized-column scale
    const std::vector<double>& b_std = path.beta[chosen];
    std::vector<double> coef(sd.d, 0.0);
    double intercept = sd.y_mean;
    for (std::size_t t = 0; t < sd.d; ++t) {
        if (sd.scale[t] == 0.0 || b_std[t] == 0.0) continue;
        coef[t] = b_std[t] / sd.scale[t];
        intercept -= coef[t] * sd.center[t];
    }

    std::size_t nz = path.nonzero[chosen];
    std::string desc = "mcp(degree=" + std::to_string(config.basis.degree) +
                       ", gamma=" + std::to_string(config.gamma) +
                       ", lambda=" + std::to_string(lambdas[chosen]) +
                       ", nonzero=" + std::to_string(nz) + ")";
    return std::make_unique<BasisPredictor>(std::move(basis), intercept, std::move(coef),
                                            std::move(desc));
}

PredictorPtr wrap_external(const Dataset& data, ExternalPredictions predictions) {
    validate_training_data(data, "wrap_external");
    if (predictions.yhat.size() != data.n())
        throw ValidationError("wrap_external: predictions cover " +
                              std::to_string(predictions.yhat.size()) + " rows but the dataset has " +
                              std::to_string(data.n()));
    if (predictions.gradients.rows() != data.n() || predictions.gradients.cols() != data.p())
        throw ValidationError("wrap_external: gradient matrix must be n x p");
    for (double v : predictions.yhat)
        if (!std::isfinite(v)) throw ValidationError("wrap_external: non-finite prediction");
    for (double v : predictions.gradients.data())
        if (!std::isfinite(v)) throw ValidationError("wrap_external: non-finite gradient");

    return std::make_unique<ExternalPredictor>(data, std::move(predictions));
}

} // namespace uqfi
