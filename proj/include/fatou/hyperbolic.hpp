#pragma once

#include <span>
#include <vector>

#include "fatou/types.hpp"

namespace fatou {

// Distances use the normalisation d(0, t) = ln((1 + t) / (1 - t)); the matching
// length element is 2|dz| / (1 - |z|^2), so curve lengths and distances agree.

/// (z - a) / (1 - conj(a) z): the disk automorphism sending a to 0.
Complex mobius_to_zero(Complex a, Complex z);

/// Poincare distance between two points of the open unit disk.
/// Throws DomainError outside the disk and OverflowError when the pseudo-
/// hyperbolic separation t reaches 1 - 1e-15.
double poincare_distance(Complex z, Complex w);

/// Pseudo-hyperbolic separation |z - w| / |1 - conj(w) z|.
double pseudo_hyperbolic(Complex z, Complex w);

/// Piecewise-linear curve strictly inside the disk, consecutive samples at
/// most kMaxGap apart.
class CurveSamples {
 public:
  static constexpr double kMaxGap = 1e-3;

  explicit CurveSamples(std::vector<Complex> points);

  /// Densifies the polyline through the given vertices so that the gap bound holds.
  static CurveSamples polyline(std::span<const Complex> vertices);

  std::span<const Complex> points() const noexcept { return points_; }

 private:
  std::vector<Complex> points_;
};

/// Hyperbolic length of the polyline. Each segment is split so that no piece
/// spans more than a few percent of its distance to the circle, then
/// integrated with 4-point Gauss-Legendre.
double kobayashi_length(const CurveSamples& curve);

/// Length of the two-leg curve from z0 = rho e^{i psi}: radially to s e^{i psi},
/// then clockwise along |z| = s to q = s e^{i phi}. Requires |q| <= |z0| < 1 and
/// q on a circle r^{1/m^k} with 0 <= psi - phi <= 2 pi / m^k (mod 2 pi).
double radial_arc_bound(int m, double r, Complex z0, Complex q);

}  // namespace fatou
