#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "uqfi/dataset.hpp"
#include "uqfi/predictor.hpp"

namespace uqfi {

/// Additive polynomial basis: powers 1..degree of every (standardized)
/// feature, plus full tensor-product terms for the listed feature pairs.
struct BasisConfig {
    int degree = 3;
    std::vector<std::pair<std::size_t, std::size_t>> interactions{}; // 0-based pairs
    bool standardize = true;
};

/// Minimax concave penalty fit on the additive polynomial basis.
struct McpConfig {
    BasisConfig basis{};
    double gamma = 3.0;              // concavity; must be > 1
    std::size_t n_lambda = 100;      // log-spaced path from lambda_max down
    double lambda_min_ratio = 0.0;   // 0 picks 0.001 (n > d) or 0.05 (d >= n)
    std::size_t max_iter = 10000;    // coordinate-descent sweeps per lambda
    double tol = 1e-7;               // relative coefficient-change tolerance

    // PathEnd skips data-driven selection and keeps the smallest lambda on the
    // path, i.e. a user-chosen fixed penalty via lambda_min_ratio.
    enum class Selector { Bic, KFoldCv, PathEnd };
    Selector selector = Selector::Bic;
    std::size_t cv_folds = 5;
    std::uint64_t cv_seed = 0;
};

/// Optional introspection into an MCP fit: the lambda path, which index was
/// selected, per-sweep objective values (concatenated along the path), and
/// the nonzero count at every lambda.
struct McpDiagnostics {
    std::vector<double> lambda_path;
    std::size_t selected_index = 0;
    std::vector<double> objective_trace;
    std::vector<std::size_t> nonzero_path;
};

/// Ordinary least squares with intercept; gradient is the coefficient
/// vector.  Throws NumericError on rank-deficient designs.
PredictorPtr fit_ols(const Dataset& data);

/// Least squares on the additive polynomial basis.  Rank deficiency is an
/// error that points at the regularized fitter.
PredictorPtr fit_additive_poly(const Dataset& data, const BasisConfig& config = {});

/// MCP-penalized least squares on the same basis, for p >> n settings.
/// Model selection along the lambda path via BIC (default) or k-fold CV.
/// When diagnostics are requested, every sweep also verifies that the
/// penalized objective did not increase.
PredictorPtr fit_mcp_additive(const Dataset& data, const McpConfig& config = {},
                              McpDiagnostics* diagnostics = nullptr);

/// Wrap stored predictions/gradients of an external model.  The resulting
/// predictor serves exactly the training rows and refuses anything else.
PredictorPtr wrap_external(const Dataset& data, ExternalPredictions predictions);

} // namespace uqfi
