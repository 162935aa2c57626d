#pragma once

#include <stdexcept>
#include <string>

namespace gfc {

// Invalid parameter domain (e.g. a stable index outside (0,1]).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Operation not available for the given spec/method combination.
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested accuracy could not be certified; carries the best estimate.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}
    double estimate() const { return estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

// Simulation retry/extension budget exhausted.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Grid too coarse for the requested quadrature.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace gfc
