#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vide {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or precondition (bad mesh, bad interval, bad grid).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Unknown registry name or missing registry parameters.
class LookupError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_residual, int iterations)
        : Error(what), last_residual_(last_residual), iterations_(iterations) {}

    [[nodiscard]] double last_residual() const noexcept { return last_residual_; }
    [[nodiscard]] int iterations() const noexcept { return iterations_; }

private:
    double last_residual_;
    int iterations_;
};

/// Newton derivative (or Jacobian) vanished at an iterate.
class SingularDerivativeError : public Error {
public:
    using Error::Error;
};

/// A solution value became non-finite or exceeded the divergence guard.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::size_t node)
        : Error(what), node_(node) {}

    [[nodiscard]] std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

/// Dense linear algebra failed (eigenvalue iteration did not converge).
class NumericFailure : public Error {
public:
    using Error::Error;
};

class ToleranceUnreachable : public Error {
public:
    using Error::Error;
};

/// No node count below the cap produced a bounded explicit solution.
class StabilityNotFound : public Error {
public:
    using Error::Error;
};

}  // namespace vide
