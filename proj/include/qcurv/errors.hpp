#pragma once

#include <stdexcept>
#include <string>

namespace qcurv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unsupported dimension (odd n or n < 4).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A precondition on an argument was violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Requested derivative order exceeds what a profile provides.
class OrderError : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature did not reach its tolerance. Carries the best estimate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const { return best_estimate_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

// Half-line tail estimate exceeds tolerance (or the decay model is not integrable).
class TailError : public Error {
 public:
  TailError(const std::string& what, double tail_bound) : Error(what), tail_bound_(tail_bound) {}
  double tail_bound() const { return tail_bound_; }

 private:
  double tail_bound_;
};

// Q-curvature is non-positive where positivity is required.
class SignError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcurv
