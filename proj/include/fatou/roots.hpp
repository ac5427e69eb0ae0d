#pragma once

#include <span>
#include <vector>

#include "fatou/types.hpp"

namespace fatou {

struct RootSolveOptions {
  int max_sweeps = 200;
  /// Converged once every root moves by less than this in a sweep.
  double step_tolerance = 1e-13;
  /// Leading coefficients below this modulus are treated as cancelled.
  double leading_tolerance = 1e-14;
  /// Radius of the circle carrying the initial guesses. Non-positive means
  /// "derive from the coefficients".
  double initial_radius = 0.0;
};

struct RootSolveResult {
  std::vector<Complex> roots;     ///< with multiplicity, lexicographically sorted
  std::vector<double> residuals;  ///< |P(root)|
  int sweeps = 0;
  /// Nominal degree minus effective degree: roots lost "at infinity".
  int degree_deficit = 0;
};

/// Evaluates a polynomial given by ascending coefficients (Horner).
Complex evaluate_polynomial(std::span<const Complex> coeffs, Complex z);

/// Product of linear/affine factors, ascending coefficients.
std::vector<Complex> multiply_polynomials(std::span<const Complex> a, std::span<const Complex> b);

/// All roots of sum_k coeffs[k] z^k by Aberth-Ehrlich simultaneous iteration.
/// Leading coefficients with modulus below options.leading_tolerance are
/// stripped and reported through degree_deficit rather than dropped silently.
/// Throws NumericError if the iteration does not settle within max_sweeps.
RootSolveResult solve_polynomial(std::span<const Complex> coeffs, const RootSolveOptions& options = {});

}  // namespace fatou
