#pragma once

#include <stdexcept>
#include <string>

namespace uqfi {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid arguments, malformed configuration, contract violations.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// Numerical failure: rank deficiency, degenerate data, non-convergence.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

/// Tail fit could not be carried out; carries the diagnostics that led to it.
class TailFitError : public NumericError {
public:
    TailFitError(const std::string& msg, double threshold, long exceedances, long sample_size)
        : NumericError(msg + " (threshold=" + std::to_string(threshold) +
                       ", exceedances=" + std::to_string(exceedances) +
                       ", n=" + std::to_string(sample_size) + ")"),
          threshold_(threshold), exceedances_(exceedances), sample_size_(sample_size) {}

    double threshold() const { return threshold_; }
    long exceedances() const { return exceedances_; }
    long sample_size() const { return sample_size_; }

private:
    double threshold_;
    long exceedances_;
    long sample_size_;
};

/// File / parse problems.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace uqfi
