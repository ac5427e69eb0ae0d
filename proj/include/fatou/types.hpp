#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace fatou {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Lexicographic order on (re, im); used wherever output order must be reproducible.
inline bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Error hierarchy. The CLI maps each family onto one exit code.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (|z| >= 1, pole proximity, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A stated precondition does not hold for the given input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver gave up; carries the worst residual seen.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double worst_residual)
      : Error(what), worst_residual_(worst_residual) {}
  double worst_residual() const noexcept { return worst_residual_; }

 private:
  double worst_residual_;
};

/// A hyperbolic quantity was requested for points numerically on the unit circle.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Preimage tree growth hit the node cap.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, int depth_reached)
      : Error(what), depth_reached_(depth_reached) {}
  int depth_reached() const noexcept { return depth_reached_; }

 private:
  int depth_reached_;
};

/// A search came back empty; carries the best margin it achieved.
class NotFoundError : public Error {
 public:
  NotFoundError(const std::string& what, double achieved_margin)
      : Error(what), achieved_margin_(achieved_margin) {}
  double achieved_margin() const noexcept { return achieved_margin_; }

 private:
  double achieved_margin_;
};

}  // namespace fatou
