#pragma once

#include <span>
#include <vector>

#include "fatou/preimage_tree.hpp"
#include "fatou/types.hpp"

namespace fatou {

/// Finite Blaschke product g(z) = e^{i theta} prod_j (z - a_j) / (1 - conj(a_j) z).
///
/// Immutable once built. Construction enforces degree >= 2, |a_j| < 1 and
/// finite entries; theta is reduced to [0, 2pi).
class BlaschkeProduct {
 public:
  BlaschkeProduct(double theta, std::vector<Complex> zeros);

  /// e^{i theta} z^m.
  static BlaschkeProduct power_map(int m, double theta = 0.0);

  double theta() const noexcept { return theta_; }
  Complex rotation() const noexcept { return rotation_; }
  std::span<const Complex> zeros() const noexcept { return zeros_; }
  int degree() const noexcept { return static_cast<int>(zeros_.size()); }
  /// Number of zeros at the origin (|a_j| <= 1e-14).
  int origin_multiplicity() const noexcept { return origin_multiplicity_; }
  bool is_power_map() const noexcept { return origin_multiplicity_ == degree(); }

 private:
  double theta_;
  Complex rotation_;
  std::vector<Complex> zeros_;
  int origin_multiplicity_ = 0;
};

inline constexpr double kOriginZeroTolerance = 1e-14;
/// How far outside the closed disk eval/derivative accept arguments.
inline constexpr double kDomainSlack = 1e-6;

Complex eval(const BlaschkeProduct& g, Complex z);

/// g^n(z).
Complex iterate(const BlaschkeProduct& g, Complex z, int n);

/// g'(z) by the product rule over factors (safe at the zeros themselves).
Complex derivative(const BlaschkeProduct& g, Complex z);

/// Closed form |g'(zeta)| = m1 + sum over nonzero a_l of (1 - |a_l|^2) / |zeta - a_l|^2
/// for |zeta| = 1. Requires at least one zero at the origin.
double boundary_derivative_modulus(const BlaschkeProduct& g, Complex zeta);

struct PreimageSet {
  Complex target;
  std::vector<Complex> roots;     ///< with multiplicity, lexicographic order
  std::vector<double> residuals;  ///< |g(root) - target|
  /// Roots lost to leading-coefficient cancellation ("at infinity"); normally 0.
  int degree_deficit = 0;
};

inline constexpr double kPreimageResidualTolerance = 1e-10;

/// g^{-1}(w) for |w| < 1: the m roots of
/// e^{i theta} prod(z - a_j) - w prod(1 - conj(a_j) z).
PreimageSet preimages(const BlaschkeProduct& g, Complex w);

/// Explicit inverse images of p_hat under k iterations of e^{i theta} z^m:
/// modulus |p_hat|^{1/m^k}, arguments (2 pi j + arg p_hat - (1 + m + ... + m^{k-1}) theta) / m^k.
/// Throws CapacityError when m^k exceeds node_cap.
std::vector<Complex> power_map_preimages(int m, double theta, Complex p_hat, int k,
                                         std::size_t node_cap = kDefaultNodeCap);

/// Union of g^{-k}(p_hat) for k <= depth, solved numerically.
PreimageTree preimage_tree(const BlaschkeProduct& g, Complex p_hat, int depth,
                           std::size_t node_cap = kDefaultNodeCap);

}  // namespace fatou
