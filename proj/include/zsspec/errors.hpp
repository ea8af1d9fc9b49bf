#pragma once

#include <stdexcept>
#include <string>

namespace zsspec {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (bad potential, overlapping intervals, ...).
class InputError : public Error {
public:
    using Error::Error;
};

/// The adaptive integrator could not make progress.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double t_reached)
        : Error(what), t_reached_(t_reached) {}
    double t_reached() const noexcept { return t_reached_; }

private:
    double t_reached_;
};

/// Gap labeling could not be made consistent with the large-|z| asymptotics.
class LabelingError : public Error {
public:
    using Error::Error;
};

/// A computed quantity contradicts a structural fact (e.g. (-1)^n Delta < 1 in a gap).
class InconsistencyError : public Error {
public:
    using Error::Error;
};

/// Iterative method stopped without meeting its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace zsspec
