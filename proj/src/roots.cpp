#include "fatou/roots.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace fatou {

Complex evaluate_polynomial(std::span<const Complex> coeffs, Complex z) {
  Complex acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<Complex> multiply_polynomials(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Complex> out(a.size() + b.size() - 1, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

namespace {

struct HornerValue {
  Complex p;
  Complex dp;
  double noise;  // rounding-error bound for p
};

HornerValue horner(std::span<const Complex> c, Complex z) {
  Complex p = 0.0;
  Complex dp = 0.0;
  double scale = 0.0;
  const double az = std::abs(z);
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
    scale = scale * az + std::abs(*it);
  }
  return {p, dp, 4.0 * static_cast<double>(c.size()) * DBL_EPSILON * scale};
}

double default_radius(std::span<const Complex> c) {
  const std::size_t n = c.size() - 1;
  const double lead = std::abs(c[n]);
  double r = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = std::abs(c[k]);
    if (a > 0.0) r = std::max(r, std::pow(a / lead, 1.0 / static_cast<double>(n - k)));
  }
  return r > 0.0 ? r : 1.0;
}

// A root of multiplicity k is a simple root of the (k-1)-th derivative, so a
// few Newton steps there recover the digits the cluster spread lost.
Complex refine_multiple_root(std::span<const Complex> c, Complex z, std::size_t k) {
  std::vector<Complex> d(c.begin(), c.end());
  for (std::size_t order = 1; order < k && d.size() > 1; ++order) {
    for (std::size_t i = 1; i < d.size(); ++i) d[i - 1] = d[i] * static_cast<double>(i);
    d.pop_back();
  }
  if (d.size() < 2) return z;
  std::vector<Complex> slope(d.size() - 1);
  for (std::size_t i = 1; i < d.size(); ++i) slope[i - 1] = d[i] * static_cast<double>(i);
  const Complex start = z;
  for (int step = 0; step < 3; ++step) {
    const Complex s = evaluate_polynomial(slope, z);
    if (s == 0.0) break;
    z -= evaluate_polynomial(d, z) / s;
  }
  // Stay inside the cluster; otherwise keep the centroid.
  return is_finite(z) && std::abs(z - start) <= 1e-6 * std::max(1.0, std::abs(start)) ? z : start;
}

// Replace tight clusters by their centroid when that does not worsen the
// residual. A multiple root otherwise comes back as a ring of radius
// ~eps^(1/k) around the true value.
void merge_clusters(std::span<const Complex> c, std::vector<Complex>& roots, std::vector<double>& residuals) {
  const std::size_t n = roots.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(roots[i] - roots[j]) <= 1e-7 * std::max(1.0, std::abs(roots[i]))) parent[find(i)] = find(j);

  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
  for (const auto& g : groups) {
    if (g.size() < 2) continue;
    Complex centroid = 0.0;
    double worst = 0.0;
    for (auto i : g) {
      centroid += roots[i];
      worst = std::max(worst, residuals[i]);
    }
    centroid /= static_cast<double>(g.size());
    centroid = refine_multiple_root(c, centroid, g.size());
    const double r = std::abs(evaluate_polynomial(c, centroid));
    if (r <= worst) {
      for (auto i : g) {
        roots[i] = centroid;
        residuals[i] = r;
      }
    }
  }
}

}  // namespace

RootSolveResult solve_polynomial(std::span<const Complex> coeffs, const RootSolveOptions& options) {
  RootSolveResult result;
  if (coeffs.empty()) return result;
  for (auto c : coeffs)
    if (!is_finite(c)) throw DomainError("polynomial coefficient is not finite");

  std::size_t n = coeffs.size() - 1;
  while (n > 0 && std::abs(coeffs[n]) < options.leading_tolerance) --n;
  result.degree_deficit = static_cast<int>(coeffs.size() - 1 - n);
  if (n == 0) return result;

  const std::span<const Complex> c = coeffs.first(n + 1);
  const double radius = options.initial_radius > 0.0 ? options.initial_radius : default_radius(c);

  std::vector<Complex> z(n);
  for (std::size_t i = 0; i < n; ++i)
    z[i] = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n) + 0.4);
  std::vector<bool> frozen(n, false);

  bool converged = false;
  int sweep = 0;
  while (sweep < options.max_sweeps && !converged) {
    ++sweep;
    double max_step = 0.0;
    bool all_frozen = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (frozen[i]) continue;
      const HornerValue h = horner(c, z[i]);
      if (std::abs(h.p) <= h.noise) {
        frozen[i] = true;
        continue;
      }
      all_frozen = false;
      Complex repulsion = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const Complex d = z[i] - z[j];
        if (d != Complex{0.0, 0.0}) repulsion += 1.0 / d;
      }
      Complex step;
      if (h.dp == Complex{0.0, 0.0}) {
        step = Complex{1e-3 * (1.0 + std::abs(z[i])), 0.0};
      } else {
        const Complex newton = h.p / h.dp;
        step = newton / (1.0 - newton * repulsion);
        if (!is_finite(step)) step = newton;
      }
      z[i] -= step;
      max_step = std::max(max_step, std::abs(step));
    }
    converged = all_frozen || max_step < options.step_tolerance;
  }
  result.sweeps = sweep;

  std::vector<double> residuals(n);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    residuals[i] = std::abs(evaluate_polynomial(c, z[i]));
    worst = std::max(worst, residuals[i]);
  }
  if (!converged)
    throw NumericError("root solver did not converge in " + std::to_string(options.max_sweeps) + " sweeps", worst);

  merge_clusters(c, z, residuals);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lex_less(z[a], z[b]); });
  result.roots.reserve(n);
  result.residuals.reserve(n);
  for (auto i : order) {
    result.roots.push_back(z[i]);
    result.residuals.push_back(residuals[i]);
  }
  return result;
}

}  // namespace fatou
