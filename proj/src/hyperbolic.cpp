#include "fatou/hyperbolic.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace fatou {

namespace {

void require_interior(Complex z) {
  if (!is_finite(z) || std::abs(z) >= 1.0) throw DomainError("point is not inside the open unit disk");
}

// 1 - |z|^2 with the subtraction done on (1 - |z|)(1 + |z|).
double one_minus_norm(Complex z) {
  const double a = std::abs(z);
  return (1.0 - a) * (1.0 + a);
}

}  // namespace

Complex mobius_to_zero(Complex a, Complex z) {
  if (!is_finite(a) || std::abs(a) >= 1.0) throw DomainError("automorphism centre must lie in the open disk");
  return (z - a) / (1.0 - std::conj(a) * z);
}

double pseudo_hyperbolic(Complex z, Complex w) { return std::abs(z - w) / std::abs(1.0 - std::conj(w) * z); }

double poincare_distance(Complex z, Complex w) {
  require_interior(z);
  require_interior(w);
  if (pseudo_hyperbolic(z, w) >= 1.0 - 1e-15) throw OverflowError("points are numerically on the unit circle");
  // 2 atanh(t) rewritten through 1 - t^2 = (1-|z|^2)(1-|w|^2)/|1 - conj(w) z|^2,
  // which keeps full relative accuracy near the circle and is symmetric in z, w.
  const double ratio = std::abs(z - w) / std::sqrt(one_minus_norm(z) * one_minus_norm(w));
  return 2.0 * std::asinh(ratio);
}

CurveSamples::CurveSamples(std::vector<Complex> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw DomainError("a curve needs at least two samples");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    require_interior(points_[i]);
    if (i > 0 && std::abs(points_[i] - points_[i - 1]) > kMaxGap * (1.0 + 1e-12))
      throw DomainError("curve samples are further apart than the gap bound");
  }
}

CurveSamples CurveSamples::polyline(std::span<const Complex> vertices) {
  if (vertices.empty()) throw DomainError("polyline needs vertices");
  std::vector<Complex> pts{vertices.front()};
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    const Complex a = vertices[i - 1];
    const Complex b = vertices[i];
    const auto n = static_cast<std::size_t>(std::ceil(std::abs(b - a) / (kMaxGap * (1.0 - 1e-9))));
    for (std::size_t j = 1; j <= n; ++j) pts.push_back(a + (b - a) * (static_cast<double>(j) / static_cast<double>(n)));
  }
  if (pts.size() == 1) pts.push_back(pts.front());
  return CurveSamples(std::move(pts));
}

double kobayashi_length(const CurveSamples& curve) {
  static constexpr std::array<double, 4> nodes = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                                  0.8611363115940526};
  static constexpr std::array<double, 4> weights = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                                    0.3478548451374538};
  // Each piece is at most this fraction of the endpoints' distance to the circle.
  constexpr double relative_piece = 0.02;

  const auto pts = curve.points();
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const Complex a = pts[i - 1];
    const Complex b = pts[i];
    const double len = std::abs(b - a);
    if (len == 0.0) continue;
    // |z| on the segment never exceeds the larger endpoint modulus.
    const double clearance = 1.0 - std::max(std::abs(a), std::abs(b));
    const auto pieces = static_cast<std::size_t>(std::ceil(len / (relative_piece * clearance)));
    const double h = len / static_cast<double>(pieces);
    for (std::size_t p = 0; p < pieces; ++p) {
      const double t0 = static_cast<double>(p) / static_cast<double>(pieces);
      const double t1 = static_cast<double>(p + 1) / static_cast<double>(pieces);
      double piece = 0.0;
      for (std::size_t g = 0; g < nodes.size(); ++g) {
        const double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * nodes[g];
        piece += weights[g] * 2.0 / one_minus_norm(a + (b - a) * t);
      }
      total += 0.5 * h * piece;
    }
  }
  return total;
}

double radial_arc_bound(int m, double r, Complex z0, Complex q) {
  if (m < 2) throw DomainError("radial-arc bound needs m >= 2");
  if (!(r > 0.0 && r < 1.0)) throw DomainError("radial-arc bound needs 0 < r < 1");
  require_interior(z0);
  require_interior(q);
  if (z0 == q) return 0.0;

  const double rho = std::abs(z0);
  const double s = std::abs(q);
  if (s > rho * (1.0 + 1e-12)) throw DomainError("radial-arc bound needs |q| <= |z0|");
  if (s < r * (1.0 - 1e-12)) throw DomainError("radial-arc bound needs |q| >= r");

  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double psi = std::arg(z0);
  double sweep = std::fmod(psi - std::arg(q), two_pi);
  if (sweep < 0.0) sweep += two_pi;
  // z0 on the ray through q: arg(q) may come out an ulp past psi.
  if (sweep > two_pi - 1e-12) sweep -= two_pi;

  // s = r^{1/m^k}  =>  m^k = ln r / ln s
  const double mk = std::log(r) / std::log(s);
  if (std::abs(sweep) > two_pi / mk * (1.0 + 1e-9) + 1e-12)
    throw DomainError("q does not bracket z0 angularly on its generation circle");

  std::vector<Complex> vertices{z0, std::polar(s, psi)};
  const auto arc_steps = static_cast<std::size_t>(std::ceil(s * std::abs(sweep) / CurveSamples::kMaxGap));
  for (std::size_t j = 1; j <= arc_steps; ++j)
    vertices.push_back(std::polar(s, psi - sweep * static_cast<double>(j) / static_cast<double>(arc_steps)));
  vertices.back() = q;
  return kobayashi_length(CurveSamples::polyline(vertices));
}

}  // namespace fatou
