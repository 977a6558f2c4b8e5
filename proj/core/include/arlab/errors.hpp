#pragma once

#include <stdexcept>
#include <string>

namespace arlab {

/// Argument outside the mathematical domain of an operation (e.g. K <= 1 where
/// the synchronized manifold does not exist).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Caller violated a structural precondition (e.g. non zero-mean input).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative or time-stepping procedure failed to produce a trustworthy value.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace arlab
