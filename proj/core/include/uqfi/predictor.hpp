#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "uqfi/dataset.hpp"

namespace uqfi {

/// Contract every fitted model implements.  const member functions must be
/// safe to call concurrently; the importance and pruning estimators fan
/// evaluation out across threads.
class Predictor {
public:
    virtual ~Predictor() = default;

    /// Point prediction h(x) for one raw feature row.
    virtual double predict(std::span<const double> row) const = 0;

    /// Gradient dh/dx written into out (size p).
    virtual void gradient(std::span<const double> row, std::span<double> out) const = 0;

    /// Number of raw features the model was fit on.
    virtual std::size_t n_features() const = 0;

    /// Human-readable description ("ols", "additive_poly(degree=3)", ...).
    virtual const std::string& descriptor() const = 0;

    /// Whether predict() accepts rows that were not in the training sample.
    /// Pruning and the shift oracle evaluate counterfactual rows and refuse
    /// predictors that cannot.
    virtual bool supports_counterfactual_rows() const { return true; }

    std::vector<double> gradient(std::span<const double> row) const {
        std::vector<double> g(n_features());
        gradient(row, g);
        return g;
    }
};

using PredictorPtr = std::unique_ptr<Predictor>;

/// Row-aligned predictions and gradients produced by an external model.
struct ExternalPredictions {
    std::vector<double> yhat;  // n entries
    Matrix gradients;          // n rows, p columns
};

} // namespace uqfi
