#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fatou/preimage_tree.hpp"
#include "fatou/types.hpp"

namespace fatou {

/// f(z) = sum_k c_k z^k with ascending coefficients, degree >= 2.
class Polynomial {
 public:
  explicit Polynomial(std::vector<Complex> coefficients);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const Complex> coefficients() const noexcept { return coeffs_; }

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;

  /// Every |z| > R satisfies |f(z)| > |z|:
  /// R = max(2, 1 + max_j |c_j / c_N|, (1 + sum_j |c_j|) / |c_N|), j < N.
  double escape_radius() const noexcept { return escape_radius_; }

 private:
  std::vector<Complex> coeffs_;
  double escape_radius_ = 2.0;
};

enum class FixedPointKind { superattracting, attracting, indifferent, repelling };

std::string_view to_string(FixedPointKind kind);

struct FixedPointInfo {
  Complex location;
  Complex multiplier;
  FixedPointKind kind;
};

/// All N roots of f(z) - z with multiplicity, classified by |f'|:
/// <= 1e-9 superattracting, < 1 - 1e-9 attracting, within 1e-9 of 1 indifferent.
std::vector<FixedPointInfo> fixed_points(const Polynomial& f);

/// Locations of the attracting and superattracting fixed points, deduplicated.
std::vector<Complex> attracting_fixed_points(const Polynomial& f);

struct OrbitOutcome {
  enum class Kind : std::uint8_t { attractor, escaped, undecided };
  Kind kind = Kind::undecided;
  int attractor = -1;
  int iterations = 0;

  bool operator==(const OrbitOutcome&) const = default;
};

inline constexpr double kConvergenceTolerance = 1e-6;
inline constexpr int kDefaultMaxIterations = 10000;

/// Iterates f from z0 until the orbit is within `tolerance` of an attractor
/// (first index wins), leaves the escape disk, or the budget runs out.
OrbitOutcome classify_orbit(const Polynomial& f, Complex z0, std::span<const Complex> attractors, int max_iter,
                            double tolerance = kConvergenceTolerance);

/// Roots of f(z) = w with residual checks, for build_preimage_tree.
PreimageSolver polynomial_preimage_solver(const Polynomial& f);

/// Union of f^{-k}(p), k <= depth. Requires p to be an attracting fixed point
/// with some preimage other than p itself.
PreimageTree inverse_orbit_tree_poly(const Polynomial& f, Complex p, int depth,
                                     std::size_t node_cap = kDefaultNodeCap);

struct Viewport {
  Complex center;
  double width = 0.0;
  double height = 0.0;
};

inline constexpr std::size_t kMaxPixels = std::size_t{4096} * 4096;

/// Complex coordinate of the centre of pixel (x, y); row 0 is the top edge.
Complex pixel_center(const Viewport& view, int width_px, int height_px, int x, int y);

struct BasinRaster {
  Viewport viewport;
  int width = 0;
  int height = 0;
  int max_iter = 0;
  std::vector<Complex> attractors;
  std::vector<OrbitOutcome> pixels;  ///< row-major

  const OrbitOutcome& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

BasinRaster classify_basin(const Polynomial& f, const Viewport& view, int width_px, int height_px, int max_iter);

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;
};

/// Reserved colour for pixels whose orbit stayed undecided.
inline constexpr std::uint8_t kUndecidedRgb[3] = {255, 0, 255};

/// Attractor colours shaded by iteration count, escaped pixels in dark grey,
/// then (optionally) tree nodes drawn as small disks coloured by generation.
Image color_basin(const BasinRaster& raster, const PreimageTree* overlay = nullptr);

struct RenderResult {
  BasinRaster raster;
  Image image;
};

RenderResult render_basin(const Polynomial& f, const Viewport& view, int width_px, int height_px, int max_iter,
                          const PreimageTree* overlay = nullptr);

/// Binary "P6" portable pixmap, max value 255.
std::string encode_ppm(const Image& image);

/// "x,y,attractor,iterations" rows; attractor is the index, -1 escaped, -2 undecided.
std::string encode_pixel_csv(const BasinRaster& raster);

}  // namespace fatou
