#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace densepack {

/// Broad failure category; the CLI maps these onto exit codes.
enum class ErrorKind { invalid_input, numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed or geometrically invalid input: singular or skewed basis,
/// coincident centers, overlapping balls, unsupported flux regime.
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(ErrorKind::invalid_input, what) {}
};

class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

/// Adaptive quadrature did not reach the requested accuracy.
class QuadratureError : public NumericalFailure {
 public:
  QuadratureError(const std::string& what, double estimate, double error_estimate)
      : NumericalFailure(what), estimate_(estimate), error_estimate_(error_estimate) {}
  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

/// Iteration limit hit; carries the best iterate seen.
class ConvergenceError : public NumericalFailure {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best)
      : NumericalFailure(what), best_(std::move(best)) {}
  const std::vector<double>& best_iterate() const noexcept { return best_; }

 private:
  std::vector<double> best_;
};

/// Linear system singular beyond the expected constant kernel (disconnected class).
class RankDeficiencyError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class InfeasibleClassError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// Overflow or underflow of a closed-form evaluation.
class RangeError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace densepack
