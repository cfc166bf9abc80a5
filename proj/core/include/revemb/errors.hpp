// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace revemb {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &what) : std::runtime_error(what) {}
};

/// Input to the symmetric eigensolver is not symmetric within tolerance.
class NotSymmetricError : public Error {
  public:
    using Error::Error;
};

/// An iterative kernel exceeded its iteration cap.
class ConvergenceError : public Error {
  public:
    using Error::Error;
};

/// A linear system has a pivot below the singularity threshold.
class SingularMatrixError : public Error {
  public:
    using Error::Error;
};

/// Matrix fails the stochastic-matrix invariants beyond tolerance.
class NotStochasticError : public Error {
  public:
    NotStochasticError(int row, double value, const std::string &what)
        : Error(what), row(row), value(value) {}
    int row;
    double value;
};

/// Matrix fails the generator-matrix invariants beyond tolerance.
class NotGeneratorError : public Error {
  public:
    NotGeneratorError(int row, int col, double value, const std::string &what)
        : Error(what), row(row), col(col), value(value) {}
    int row;
    int col;
    double value;
};

/// Operation called with a matrix of unsupported dimension.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Parsed matrix data is not square.
class NotSquareError : public Error {
  public:
    using Error::Error;
};

/// A state was never visited, so its transition row cannot be estimated.
class UnvisitedStateError : public Error {
  public:
    UnvisitedStateError(int state, const std::string &what)
        : Error(what), state(state) {}
    int state;
};

/// Malformed input file.
class ParseError : public Error {
  public:
    explicit ParseError(const std::string &what, int line = 0, int column = 0)
        : Error(what), line(line), column(column) {}
    int line;
    int column;
};

/// Trajectory contains a state index outside the declared state space.
class IndexOutOfRangeError : public Error {
  public:
    using Error::Error;
};

} // namespace revemb
