#include "fatou/polydyn.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "fatou/parallel.hpp"
#include "fatou/roots.hpp"

namespace fatou {

Polynomial::Polynomial(std::vector<Complex> coefficients) : coeffs_(std::move(coefficients)) {
  for (auto c : coeffs_)
    if (!is_finite(c)) throw DomainError("polynomial coefficient is not finite");
  if (coeffs_.size() < 3) throw DomainError("polynomial degree must be at least 2");
  const double lead = std::abs(coeffs_.back());
  if (lead <= 1e-14) throw DomainError("polynomial leading coefficient vanishes");

  double ratio = 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < coeffs_.size(); ++j) {
    ratio = std::max(ratio, std::abs(coeffs_[j]) / lead);
    sum += std::abs(coeffs_[j]);
  }
  escape_radius_ = std::max({2.0, 1.0 + ratio, (1.0 + sum) / lead});
}

Complex Polynomial::operator()(Complex z) const { return evaluate_polynomial(coeffs_, z); }

Complex Polynomial::derivative(Complex z) const {
  Complex acc = 0.0;
  for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) acc = acc * z + static_cast<double>(k) * coeffs_[k];
  return acc;
}

std::string_view to_string(FixedPointKind kind) {
  switch (kind) {
    case FixedPointKind::superattracting: return "superattracting";
    case FixedPointKind::attracting: return "attracting";
    case FixedPointKind::indifferent: return "indifferent";
    case FixedPointKind::repelling: return "repelling";
  }
  return "unknown";
}

namespace {

FixedPointKind classify_multiplier(Complex lambda) {
  const double a = std::abs(lambda);
  if (a <= 1e-9) return FixedPointKind::superattracting;
  if (a < 1.0 - 1e-9) return FixedPointKind::attracting;
  if (std::abs(a - 1.0) <= 1e-9) return FixedPointKind::indifferent;
  return FixedPointKind::repelling;
}

double magnitude_scale(std::span<const Complex> c, Complex z) {
  double s = 0.0;
  const double az = std::abs(z);
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * az + std::abs(*it);
  return s;
}

}  // namespace

std::vector<FixedPointInfo> fixed_points(const Polynomial& f) {
  std::vector<Complex> shifted(f.coefficients().begin(), f.coefficients().end());
  shifted[1] -= 1.0;
  const RootSolveResult solved = solve_polynomial(shifted);

  std::vector<FixedPointInfo> out;
  for (Complex z : solved.roots) {
    // Polish simple roots; multiple roots come back already averaged.
    for (int i = 0; i < 2; ++i) {
      const Complex slope = f.derivative(z) - 1.0;
      if (std::abs(slope) < 1e-4) break;
      z -= (f(z) - z) / slope;
    }
    const double residual = std::abs(f(z) - z);
    if (residual > 1e-9 * std::max(1.0, magnitude_scale(shifted, z)))
      throw NumericError("fixed point residual above tolerance", residual);
    const Complex lambda = f.derivative(z);
    out.push_back(FixedPointInfo{z, lambda, classify_multiplier(lambda)});
  }
  return out;
}

std::vector<Complex> attracting_fixed_points(const Polynomial& f) {
  std::vector<Complex> out;
  for (const auto& fp : fixed_points(f)) {
    if (fp.kind != FixedPointKind::attracting && fp.kind != FixedPointKind::superattracting) continue;
    const bool seen = std::any_of(out.begin(), out.end(), [&](Complex a) { return std::abs(a - fp.location) < 1e-8; });
    if (!seen) out.push_back(fp.location);
  }
  return out;
}

OrbitOutcome classify_orbit(const Polynomial& f, Complex z0, std::span<const Complex> attractors, int max_iter,
                            double tolerance) {
  const double escape = f.escape_radius();
  Complex z = z0;
  for (int n = 0;; ++n) {
    for (std::size_t i = 0; i < attractors.size(); ++i)
      if (std::abs(z - attractors[i]) <= tolerance) return {OrbitOutcome::Kind::attractor, static_cast<int>(i), n};
    if (!is_finite(z) || std::abs(z) > escape) return {OrbitOutcome::Kind::escaped, -1, n};
    if (n >= max_iter) return {OrbitOutcome::Kind::undecided, -1, n};
    z = f(z);
  }
}

PreimageSolver polynomial_preimage_solver(const Polynomial& f) {
  return [f](Complex w) {
    std::vector<Complex> shifted(f.coefficients().begin(), f.coefficients().end());
    shifted[0] -= w;
    const RootSolveResult solved = solve_polynomial(shifted);
    std::vector<PreimageRoot> out;
    out.reserve(solved.roots.size());
    for (Complex z : solved.roots) {
      const double residual = std::abs(f(z) - w);
      if (residual > 1e-9 * std::max(1.0, magnitude_scale(shifted, z)))
        throw NumericError("polynomial preimage residual above tolerance", residual);
      out.push_back({z, residual});
    }
    return out;
  };
}

PreimageTree inverse_orbit_tree_poly(const Polynomial& f, Complex p, int depth, std::size_t node_cap) {
  if (!is_finite(p)) throw DomainError("base point is not finite");
  if (std::abs(f(p) - p) > 1e-9 * std::max(1.0, std::abs(p)))
    throw PreconditionError("inverse-orbit base point is not a fixed point of f");
  if (!(std::abs(f.derivative(p)) < 1.0)) throw PreconditionError("inverse-orbit base point is not attracting");

  const PreimageSolver solve = polynomial_preimage_solver(f);

  const auto first = solve(p);
  const bool only_self = std::all_of(first.begin(), first.end(), [&](const PreimageRoot& r) {
    return std::abs(r.z - p) < 1e-8 * std::max(1.0, std::abs(p));
  });
  if (only_self) throw PreconditionError("every preimage of the fixed point is the point itself");

  return build_preimage_tree(p, depth, solve, node_cap);
}

Complex pixel_center(const Viewport& view, int width_px, int height_px, int x, int y) {
  const double re = view.center.real() - 0.5 * view.width + (x + 0.5) * view.width / width_px;
  const double im = view.center.imag() + 0.5 * view.height - (y + 0.5) * view.height / height_px;
  return {re, im};
}

BasinRaster classify_basin(const Polynomial& f, const Viewport& view, int width_px, int height_px, int max_iter) {
  if (!(view.width > 0.0) || !(view.height > 0.0) || !is_finite(view.center) || !std::isfinite(view.width) ||
      !std::isfinite(view.height))
    throw DomainError("viewport must have positive, finite extent");
  if (width_px <= 0 || height_px <= 0) throw DomainError("resolution must be positive");
  if (static_cast<std::size_t>(width_px) * static_cast<std::size_t>(height_px) > kMaxPixels)
    throw DomainError("resolution exceeds the pixel cap");
  if (max_iter < 0) throw DomainError("iteration budget must be non-negative");

  BasinRaster raster;
  raster.viewport = view;
  raster.width = width_px;
  raster.height = height_px;
  raster.max_iter = max_iter;
  raster.attractors = attracting_fixed_points(f);
  raster.pixels.resize(static_cast<std::size_t>(width_px) * height_px);
  parallel_for(static_cast<std::size_t>(height_px), [&](std::size_t y) {
    for (int x = 0; x < width_px; ++x) {
      const Complex z = pixel_center(view, width_px, height_px, x, static_cast<int>(y));
      raster.pixels[y * width_px + x] = classify_orbit(f, z, raster.attractors, max_iter);
    }
  }, 1);
  return raster;
}

namespace {

using Rgb = std::array<std::uint8_t, 3>;

constexpr std::array<Rgb, 6> kAttractorPalette = {{
    {230, 96, 60}, {60, 140, 230}, {90, 200, 90}, {230, 200, 60}, {170, 90, 210}, {60, 200, 200},
}};

constexpr std::array<Rgb, 8> kGenerationPalette = {{
    {255, 255, 255}, {255, 235, 59}, {0, 229, 255}, {118, 255, 3},
    {255, 145, 0}, {41, 121, 255}, {255, 64, 129}, {158, 158, 158},
}};

Rgb shade(Rgb base, double factor) {
  Rgb out;
  for (int c = 0; c < 3; ++c) out[c] = static_cast<std::uint8_t>(std::lround(base[c] * factor));
  return out;
}

Rgb pixel_color(const OrbitOutcome& o, int max_iter) {
  const double depth = max_iter > 0 ? std::log1p(o.iterations) / std::log1p(max_iter) : 0.0;
  switch (o.kind) {
    case OrbitOutcome::Kind::attractor:
      return shade(kAttractorPalette[static_cast<std::size_t>(o.attractor) % kAttractorPalette.size()],
                   1.0 - 0.65 * depth);
    case OrbitOutcome::Kind::escaped: {
      const auto v = static_cast<std::uint8_t>(std::lround(16.0 + 100.0 * depth));
      return {v, v, v};
    }
    case OrbitOutcome::Kind::undecided:
      break;
  }
  return {kUndecidedRgb[0], kUndecidedRgb[1], kUndecidedRgb[2]};
}

}  // namespace

Image color_basin(const BasinRaster& raster, const PreimageTree* overlay) {
  Image img;
  img.width = raster.width;
  img.height = raster.height;
  img.rgb.resize(static_cast<std::size_t>(raster.width) * raster.height * 3);
  for (std::size_t i = 0; i < raster.pixels.size(); ++i) {
    const Rgb c = pixel_color(raster.pixels[i], raster.max_iter);
    std::copy(c.begin(), c.end(), img.rgb.begin() + static_cast<std::ptrdiff_t>(3 * i));
  }
  if (overlay == nullptr) return img;

  const Viewport& v = raster.viewport;
  const double left = v.center.real() - 0.5 * v.width;
  const double top = v.center.imag() + 0.5 * v.height;
  // Deep generations first so shallow ones stay visible on top.
  for (std::size_t n = overlay->nodes.size(); n-- > 0;) {
    const TreeNode& node = overlay->nodes[n];
    const double fx = (node.z.real() - left) / v.width * raster.width;
    const double fy = (top - node.z.imag()) / v.height * raster.height;
    if (!(fx >= -1.0 && fy >= -1.0 && fx < raster.width + 1.0 && fy < raster.height + 1.0)) continue;
    const auto cx = static_cast<int>(std::floor(fx));
    const auto cy = static_cast<int>(std::floor(fy));
    const Rgb color = kGenerationPalette[static_cast<std::size_t>(node.generation) % kGenerationPalette.size()];
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx * dx + dy * dy > 1) continue;
        const int x = cx + dx;
        const int y = cy + dy;
        if (x < 0 || y < 0 || x >= raster.width || y >= raster.height) continue;
        const auto at = (static_cast<std::size_t>(y) * raster.width + x) * 3;
        std::copy(color.begin(), color.end(), img.rgb.begin() + static_cast<std::ptrdiff_t>(at));
      }
    }
  }
  return img;
}

RenderResult render_basin(const Polynomial& f, const Viewport& view, int width_px, int height_px, int max_iter,
                          const PreimageTree* overlay) {
  RenderResult out;
  out.raster = classify_basin(f, view, width_px, height_px, max_iter);
  out.image = color_basin(out.raster, overlay);
  return out;
}

std::string encode_ppm(const Image& image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.rgb.data()), image.rgb.size());
  return out;
}

std::string encode_pixel_csv(const BasinRaster& raster) {
  std::string out = "x,y,attractor,iterations\n";
  out.reserve(out.size() + raster.pixels.size() * 16);
  for (int y = 0; y < raster.height; ++y) {
    for (int x = 0; x < raster.width; ++x) {
      const OrbitOutcome& o = raster.at(x, y);
      const int code = o.kind == OrbitOutcome::Kind::attractor ? o.attractor
                       : o.kind == OrbitOutcome::Kind::escaped ? -1
                                                                : -2;
      out += std::to_string(x) + ',' + std::to_string(y) + ',' + std::to_string(code) + ',' +
             std::to_string(o.iterations) + '\n';
    }
  }
  return out;
}

}  // namespace fatou
