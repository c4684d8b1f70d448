#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace uqfi {

/// Dense row-major matrix; deliberately minimal so the public API carries no
/// linear-algebra dependency.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) {
        return {data_.data() + i * cols_, cols_};
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Where a dataset came from; written next to the CSV as a JSON sidecar so a
/// file on disk stays self-describing.
struct DatasetMeta {
    std::string source = "unknown";    // "simulate", "file", ...
    int model_id = 0;                  // 1..9, or 0 for the linear benchmark
    std::string error_law;             // "normal", "t3", "exp2", "cauchy"
    std::uint64_t feature_seed = 0;
    std::uint64_t error_seed = 0;
    double rho = 0.5;

    bool operator==(const DatasetMeta&) const = default;
};

struct Dataset {
    Matrix x;                  // n rows, p feature columns
    std::vector<double> y;     // n outcomes
    DatasetMeta meta;

    std::size_t n() const { return y.size(); }
    std::size_t p() const { return x.cols(); }
};

} // namespace uqfi
