#include "fatou/shadowing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fatou/hyperbolic.hpp"
#include "fatou/parallel.hpp"

namespace fatou {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SampleGrid SampleGrid::shells(int i_max, int angles) {
  if (i_max < 1) throw DomainError("sample grid needs i_max >= 1");
  if (angles < 8) throw DomainError("sample grid needs at least 8 angles per circle");
  if (i_max > 52) throw DomainError("sample grid radii 1 - 2^-i are not representable beyond i = 52");
  SampleGrid grid;
  grid.i_max_ = i_max;
  grid.angles_ = angles;
  grid.points_.reserve(static_cast<std::size_t>(i_max) * static_cast<std::size_t>(angles));
  for (int i = 1; i <= i_max; ++i) {
    const double r = 1.0 - std::ldexp(1.0, -i);
    for (int j = 0; j < angles; ++j) grid.points_.push_back(std::polar(r, kTwoPi * j / angles));
  }
  return grid;
}

SampleGrid SampleGrid::from_points(std::vector<Complex> points) {
  if (points.empty()) throw DomainError("sample grid is empty");
  for (auto z : points)
    if (!is_finite(z)) throw DomainError("sample point is not finite");
  SampleGrid grid;
  grid.points_ = std::move(points);
  return grid;
}

double SampleGrid::max_radius() const {
  double r = 0.0;
  for (auto z : points_) r = std::max(r, std::abs(z));
  return r;
}

std::string SampleGrid::describe() const {
  if (is_shells()) return "shells i_max=" + std::to_string(i_max_) + " angles=" + std::to_string(angles_);
  return "points n=" + std::to_string(points_.size());
}

ShadowMatch nearest_preimage(const PreimageTree& tree, Complex z0, int max_generation) {
  if (!is_finite(z0) || std::abs(z0) >= 1.0) throw DomainError("sample point is not inside the open disk");
  const std::size_t n = tree.prefix_size(max_generation);
  // d is increasing in |z0 - q|^2 / (1 - |q|^2) for fixed z0.
  std::size_t best = 0;
  double best_key = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const TreeNode& node = tree.nodes[i];
    const double a = std::abs(node.z);
    const double key = std::norm(z0 - node.z) / ((1.0 - a) * (1.0 + a));
    if (key < best_key) {
      best_key = key;
      best = i;
    } else if (key == best_key) {
      const TreeNode& cur = tree.nodes[best];
      if (node.generation < cur.generation || (node.generation == cur.generation && lex_less(node.z, cur.z)))
        best = i;
    }
  }
  const TreeNode& node = tree.nodes[best];
  return ShadowMatch{node.z, node.generation, best, poincare_distance(z0, node.z)};
}

ShadowMatch shadow_distance(const BlaschkeProduct& g, Complex p_hat, int depth, Complex z0) {
  return nearest_preimage(preimage_tree(g, p_hat, depth), z0);
}

ShadowReport empirical_constant(const BlaschkeProduct& g, Complex p_hat, int depth, const SampleGrid& grid) {
  return empirical_constant(g, preimage_tree(g, p_hat, depth), depth, grid);
}

ShadowReport empirical_constant(const BlaschkeProduct& g, const PreimageTree& tree, int depth,
                                const SampleGrid& grid) {
  if (depth < 0 || depth > tree.depth) throw DomainError("requested depth exceeds the tree depth");
  ShadowReport report;
  report.depth = depth;
  report.tree_max_modulus = tree.max_modulus(depth);
  report.depth_warning = report.tree_max_modulus <= grid.max_radius();

  const auto& pts = grid.points();
  report.records.resize(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    ShadowRecord& rec = report.records[i];
    rec.z0 = pts[i];
    try {
      const ShadowMatch m = nearest_preimage(tree, pts[i], depth);
      rec.q = m.q;
      rec.generation = m.generation;
      rec.distance = m.distance;
    } catch (const DomainError&) {
      rec.status = SampleStatus::overflow;
    } catch (const OverflowError&) {
      rec.status = SampleStatus::overflow;
    }
    if (rec.status == SampleStatus::overflow) rec.distance = std::numeric_limits<double>::quiet_NaN();
  });

  for (const auto& rec : report.records) {
    if (rec.status == SampleStatus::overflow) {
      ++report.overflow_count;
      continue;
    }
    report.empirical_sup = std::max(report.empirical_sup, rec.distance);
  }
  // Every reported q must be a genuine preimage of the base point.
  for (const auto& rec : report.records) {
    if (rec.status != SampleStatus::ok) continue;
    const double drift = std::abs(iterate(g, rec.q, rec.generation) - tree.base);
    if (drift > 1e-7 * rec.generation)
      throw NumericError("shadowing point does not return to the base point", drift);
  }

  if (g.is_power_map() && std::abs(tree.base) > 0.0)
    report.theory = theoretical_C0_power(g.degree(), tree.base);
  return report;
}

PowerMapConstants theoretical_C0_power(int m, Complex p_hat) {
  if (m < 2) throw DomainError("power map needs m >= 2");
  const double r = std::abs(p_hat);
  if (!is_finite(p_hat) || r <= 0.0 || r >= 1.0) throw DomainError("constants need 0 < |p_hat| < 1");

  constexpr int samples = 100000;
  const double start = std::arg(p_hat);
  double sigma = 0.0;
  for (int j = 0; j < samples; ++j)
    sigma = std::max(sigma, std::abs(mobius_to_zero(p_hat, std::polar(r, start + kTwoPi * j / samples))));

  PowerMapConstants c;
  c.sigma = sigma;
  c.c_prime = std::log((1.0 + sigma) / (1.0 - sigma));
  const double lr = std::log(r);
  c.c_doubleprime = -std::sqrt(lr * lr + 4.0 * m * m * std::numbers::pi * std::numbers::pi) /
                    (std::pow(r, 1.0 / m) * lr);
  c.c0 = std::max(c.c_prime, c.c_doubleprime);
  return c;
}

Bracket bracket_preimage(int m, double theta, Complex p_hat, Complex z0) {
  if (m < 2) throw DomainError("power map needs m >= 2");
  const double r = std::abs(p_hat);
  const double rho = std::abs(z0);
  if (r <= 0.0 || r >= 1.0) throw DomainError("bracket needs 0 < |p_hat| < 1");
  if (!(rho >= r && rho < 1.0)) throw DomainError("bracket needs |p_hat| <= |z0| < 1");

  // Largest k with r^{1/m^k} <= rho.
  int k = 0;
  double mk = 1.0;        // m^k
  double geometric = 0.0; // 1 + m + ... + m^{k-1}
  while (k < 60 && std::pow(r, 1.0 / (mk * m)) <= rho) {
    geometric += mk;
    mk *= m;
    ++k;
  }
  const double s = std::pow(r, 1.0 / mk);
  const double step = kTwoPi / mk;
  const double base_angle = (std::arg(p_hat) - geometric * theta) / mk;
  const double psi = std::arg(z0);
  double dtheta = std::fmod(psi - base_angle, step);
  if (dtheta < 0.0) dtheta += step;

  Bracket b;
  b.generation = k;
  b.q = std::polar(s, psi - dtheta);
  b.delta_r = rho - s;
  b.delta_theta = dtheta;
  return b;
}

namespace {

double min_derivative_on_circle(const BlaschkeProduct& g, double t) {
  constexpr int samples = 2048;
  double lo = std::numeric_limits<double>::infinity();
  for (int j = 0; j < samples; ++j) lo = std::min(lo, std::abs(derivative(g, std::polar(t, kTwoPi * j / samples))));
  return lo;
}

}  // namespace

AnnulusSpec find_expanding_annulus(const BlaschkeProduct& g, double epsilon) {
  if (g.origin_multiplicity() < 1) throw PreconditionError("annulus search needs a zero at the origin");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("annulus margin epsilon must be positive");

  constexpr double lattice = 1e-3;
  constexpr int steps = 999;
  const double target = 1.0 + epsilon;

  double outer = 1.0 - lattice;
  double min_seen = min_derivative_on_circle(g, outer);
  if (!(min_seen > target))
    throw NotFoundError("no expanding annulus for epsilon = " + std::to_string(epsilon), min_seen - 1.0);

  // Walk inward until a lattice circle fails.
  double good = outer;
  double bad = -1.0;
  for (int i = 2; i <= steps; ++i) {
    const double t = 1.0 - i * lattice;
    const double v = min_derivative_on_circle(g, t);
    if (!(v > target)) {
      bad = t;
      break;
    }
    good = t;
    min_seen = std::min(min_seen, v);
  }
  if (bad >= 0.0) {
    while (good - bad > 1e-6) {
      const double mid = 0.5 * (good + bad);
      const double v = min_derivative_on_circle(g, mid);
      if (v > target) {
        good = mid;
        min_seen = std::min(min_seen, v);
      } else {
        bad = mid;
      }
    }
  }
  return AnnulusSpec{good, epsilon, min_seen};
}

AnnulusCheck verify_annulus_expansion(const BlaschkeProduct& g, const AnnulusSpec& annulus,
                                      std::span<const Complex> points) {
  AnnulusCheck check;
  check.worst_margin = std::numeric_limits<double>::infinity();
  auto inside = [&](double a) { return a > annulus.r0 && a < 1.0; };
  for (auto z : points) {
    const double az = std::abs(z);
    if (!inside(az)) {
      ++check.points_excluded;
      continue;
    }
    ++check.points_checked;
    for (auto q : preimages(g, z).roots) {
      const double aq = std::abs(q);
      if (!inside(aq)) continue;
      ++check.preimages_checked;
      check.worst_margin = std::min(check.worst_margin, aq - az);
      if (!(aq > az - 1e-12)) check.violations.push_back({z, q});
    }
  }
  return check;
}

AnnulusCheck verify_annulus_expansion(const BlaschkeProduct& g, const AnnulusSpec& annulus, int samples,
                                      std::uint64_t seed) {
  if (samples < 0) throw DomainError("sample count must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(annulus.r0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  while (pts.size() < static_cast<std::size_t>(samples)) {
    const double t = radius(rng);
    const double a = angle(rng);
    if (t <= annulus.r0) continue;
    pts.push_back(std::polar(t, a));
  }
  return verify_annulus_expansion(g, annulus, pts);
}

std::vector<DensityStep> boundary_density_profile(const PreimageTree& tree) {
  std::vector<DensityStep> profile;
  std::vector<double> angles;
  std::size_t begin = 0;
  for (int k = 0; k <= tree.depth; ++k) {
    const std::size_t end = tree.prefix_size(k);
    if (end > begin) {
      std::vector<double> mod;
      for (std::size_t i = begin; i < end; ++i) mod.push_back(std::abs(tree.nodes[i].z));
      std::vector<double> sorted = mod;
      std::sort(sorted.begin(), sorted.end());
      const double median = sorted[(sorted.size() - 1) / 2];
      for (std::size_t i = begin; i < end; ++i) {
        if (mod[i - begin] < median - 1e-12) continue;
        double a = std::arg(tree.nodes[i].z);
        if (a < 0.0) a += kTwoPi;
        angles.push_back(a);
      }
    }
    begin = end;

    std::sort(angles.begin(), angles.end());
    double gap = kTwoPi;
    if (angles.size() > 1) {
      gap = angles.front() + kTwoPi - angles.back();
      for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
    }
    profile.push_back(DensityStep{k, gap, angles.size()});
  }
  return profile;
}

std::vector<DensityStep> boundary_density_profile(const BlaschkeProduct& g, Complex p_hat, int depth) {
  if (g.origin_multiplicity() < 1) throw PreconditionError("density profile needs a zero at the origin");
  return boundary_density_profile(preimage_tree(g, p_hat, depth));
}

}  // namespace fatou
