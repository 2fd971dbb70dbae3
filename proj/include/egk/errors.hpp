// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace egk {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument is outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An integral representation diverges for the requested arguments.
class DivergenceError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A series term could not be evaluated; carries the offending term index.
class SeriesTermError : public DivergenceError {
public:
    SeriesTermError(int term, const std::string& what)
        : DivergenceError(what), term_(term) {}
    int term() const noexcept { return term_; }

private:
    int term_;
};

/// A numerical method failed to reach its tolerance.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature exhausted its subdivision budget.
class AccuracyError : public NumericalError {
public:
    AccuracyError(const std::string& what, double best_estimate, double error_estimate)
        : NumericalError(what), best_(best_estimate), err_(error_estimate) {}
    double best_estimate() const noexcept { return best_; }
    double error_estimate() const noexcept { return err_; }

private:
    double best_;
    double err_;
};

/// A contour integral did not settle (tail not decaying, or step refinement
/// still moving the result).
class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace egk
