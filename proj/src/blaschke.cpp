#include "fatou/blaschke.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fatou/roots.hpp"

namespace fatou {

BlaschkeProduct::BlaschkeProduct(double theta, std::vector<Complex> zeros) : zeros_(std::move(zeros)) {
  if (!std::isfinite(theta)) throw DomainError("rotation angle is not finite");
  if (zeros_.size() < 2) throw DomainError("Blaschke product needs degree >= 2");
  for (auto a : zeros_) {
    if (!is_finite(a)) throw DomainError("Blaschke zero is not finite");
    if (std::abs(a) >= 1.0) throw DomainError("Blaschke zero must lie in the open unit disk");
    if (std::abs(a) <= kOriginZeroTolerance) ++origin_multiplicity_;
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  theta_ = std::fmod(theta, two_pi);
  if (theta_ < 0.0) theta_ += two_pi;
  rotation_ = std::polar(1.0, theta_);
}

BlaschkeProduct BlaschkeProduct::power_map(int m, double theta) {
  if (m < 2) throw DomainError("power map needs m >= 2");
  return BlaschkeProduct(theta, std::vector<Complex>(static_cast<std::size_t>(m), Complex{0.0, 0.0}));
}

namespace {

void check_argument(Complex z) {
  if (!is_finite(z)) throw DomainError("argument is not finite");
  if (std::abs(z) > 1.0 + kDomainSlack) throw DomainError("argument lies outside the closed unit disk");
}

Complex pole_factor(Complex a, Complex z) {
  const Complex d = 1.0 - std::conj(a) * z;
  if (std::abs(d) < 1e-14) throw DomainError("argument is at a pole of the Blaschke product");
  return d;
}

}  // namespace

Complex eval(const BlaschkeProduct& g, Complex z) {
  check_argument(z);
  Complex value = g.rotation();
  for (auto a : g.zeros()) value *= (z - a) / pole_factor(a, z);
  return value;
}

Complex iterate(const BlaschkeProduct& g, Complex z, int n) {
  for (int i = 0; i < n; ++i) z = eval(g, z);
  return z;
}

Complex derivative(const BlaschkeProduct& g, Complex z) {
  check_argument(z);
  const auto zeros = g.zeros();
  const std::size_t m = zeros.size();
  std::vector<Complex> factor(m);
  std::vector<Complex> factor_prime(m);
  for (std::size_t j = 0; j < m; ++j) {
    const Complex d = pole_factor(zeros[j], z);
    factor[j] = (z - zeros[j]) / d;
    factor_prime[j] = (1.0 - std::norm(zeros[j])) / (d * d);
  }
  // prefix[j] * suffix[j] = product of all factors except j
  std::vector<Complex> suffix(m + 1, Complex{1.0, 0.0});
  for (std::size_t j = m; j-- > 0;) suffix[j] = suffix[j + 1] * factor[j];
  Complex prefix = 1.0;
  Complex sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    sum += factor_prime[j] * prefix * suffix[j + 1];
    prefix *= factor[j];
  }
  return g.rotation() * sum;
}

double boundary_derivative_modulus(const BlaschkeProduct& g, Complex zeta) {
  if (!is_finite(zeta) || std::abs(std::abs(zeta) - 1.0) > 1e-12)
    throw DomainError("boundary derivative needs |zeta| = 1");
  if (g.origin_multiplicity() < 1) throw PreconditionError("boundary derivative formula needs a zero at the origin");
  double total = static_cast<double>(g.origin_multiplicity());
  for (auto a : g.zeros()) {
    if (std::abs(a) <= kOriginZeroTolerance) continue;
    total += (1.0 - std::norm(a)) / std::norm(zeta - a);
  }
  return total;
}

PreimageSet preimages(const BlaschkeProduct& g, Complex w) {
  if (!is_finite(w) || std::abs(w) >= 1.0) throw DomainError("preimages need |w| < 1");

  // e^{i theta} prod (z - a_j)  -  w prod (1 - conj(a_j) z)
  std::vector<Complex> numer{Complex{1.0, 0.0}};
  std::vector<Complex> denom{Complex{1.0, 0.0}};
  for (auto a : g.zeros()) {
    const Complex lin_n[2] = {-a, Complex{1.0, 0.0}};
    const Complex lin_d[2] = {Complex{1.0, 0.0}, -std::conj(a)};
    numer = multiply_polynomials(numer, lin_n);
    denom = multiply_polynomials(denom, lin_d);
  }
  std::vector<Complex> coeffs(numer.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] = g.rotation() * numer[k] - w * denom[k];

  RootSolveOptions options;
  options.initial_radius = 0.9;
  const RootSolveResult solved = solve_polynomial(coeffs, options);

  PreimageSet out;
  out.target = w;
  out.degree_deficit = solved.degree_deficit;
  out.roots = solved.roots;
  out.residuals.reserve(out.roots.size());
  double worst = 0.0;
  for (auto z : out.roots) {
    if (std::abs(z) >= 1.0) throw NumericError("preimage of an interior point landed outside the disk", std::abs(z));
    const double r = std::abs(eval(g, z) - w);
    out.residuals.push_back(r);
    worst = std::max(worst, r);
  }
  if (worst > kPreimageResidualTolerance) throw NumericError("preimage residual above tolerance", worst);
  return out;
}

std::vector<Complex> power_map_preimages(int m, double theta, Complex p_hat, int k, std::size_t node_cap) {
  if (m < 2) throw DomainError("power map needs m >= 2");
  if (k < 0) throw DomainError("generation must be non-negative");
  const double r = std::abs(p_hat);
  if (!is_finite(p_hat) || r <= 0.0 || r >= 1.0) throw DomainError("power-map preimages need 0 < |p_hat| < 1");

  // m^k and 1 + m + ... + m^{k-1}, guarding the cap before overflow.
  double count = 1.0;
  double geometric = 0.0;
  for (int i = 0; i < k; ++i) {
    geometric += count;
    count *= m;
    if (count > static_cast<double>(node_cap))
      throw CapacityError("m^k = " + std::to_string(m) + "^" + std::to_string(k) + " exceeds node cap", i);
  }
  const auto n = static_cast<std::size_t>(count);
  const double s = std::pow(r, 1.0 / count);
  const double shift = std::arg(p_hat) - geometric * theta;
  std::vector<Complex> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j)
    out.push_back(std::polar(s, (2.0 * std::numbers::pi * static_cast<double>(j) + shift) / count));
  return out;
}

PreimageTree preimage_tree(const BlaschkeProduct& g, Complex p_hat, int depth, std::size_t node_cap) {
  if (!is_finite(p_hat) || std::abs(p_hat) >= 1.0) throw DomainError("tree base point must lie in the open disk");
  return build_preimage_tree(
      p_hat, depth,
      [&g](Complex w) {
        PreimageSet set = preimages(g, w);
        std::vector<PreimageRoot> out;
        out.reserve(set.roots.size());
        for (std::size_t i = 0; i < set.roots.size(); ++i) out.push_back({set.roots[i], set.residuals[i]});
        return out;
      },
      node_cap);
}

}  // namespace fatou
