#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fatou/blaschke.hpp"
#include "fatou/preimage_tree.hpp"
#include "fatou/types.hpp"

namespace fatou {

/// Sample points z0. The shell layout puts N equispaced points on each circle
/// r_i = 1 - 2^{-i}, i = 1..i_max, so consecutive shells are roughly one
/// hyperbolic unit apart.
class SampleGrid {
 public:
  static SampleGrid shells(int i_max, int angles);
  static SampleGrid from_points(std::vector<Complex> points);

  const std::vector<Complex>& points() const noexcept { return points_; }
  bool is_shells() const noexcept { return i_max_ > 0; }
  int i_max() const noexcept { return i_max_; }
  int angles() const noexcept { return angles_; }
  double max_radius() const;
  std::string describe() const;

 private:
  std::vector<Complex> points_;
  int i_max_ = 0;
  int angles_ = 0;
};

struct ShadowMatch {
  Complex q;
  int generation = 0;
  std::size_t node = 0;
  double distance = 0.0;
};

/// Tree node of generation <= max_generation nearest to z0 in the Poincare
/// distance. Ties go to the smaller generation, then lexicographic (re, im).
ShadowMatch nearest_preimage(const PreimageTree& tree, Complex z0, int max_generation);
inline ShadowMatch nearest_preimage(const PreimageTree& tree, Complex z0) {
  return nearest_preimage(tree, z0, tree.depth);
}

ShadowMatch shadow_distance(const BlaschkeProduct& g, Complex p_hat, int depth, Complex z0);

enum class SampleStatus { ok, overflow };

struct ShadowRecord {
  Complex z0;
  SampleStatus status = SampleStatus::ok;
  Complex q;
  int generation = 0;
  double distance = 0.0;  ///< NaN when status is overflow
};

struct PowerMapConstants {
  double sigma = 0.0;
  double c_prime = 0.0;        ///< ln((1 + sigma) / (1 - sigma)), covers |z0| <= |p_hat|
  double c_doubleprime = 0.0;  ///< radial + arc estimate, covers |z0| > |p_hat|
  double c0 = 0.0;             ///< max of the two
};

struct ShadowReport {
  std::vector<ShadowRecord> records;  ///< grid order
  double empirical_sup = 0.0;         ///< over ok records
  std::optional<PowerMapConstants> theory;
  int depth = 0;
  double tree_max_modulus = 0.0;
  /// The tree does not reach past the outermost sample.
  bool depth_warning = false;
  std::size_t overflow_count = 0;
};

ShadowReport empirical_constant(const BlaschkeProduct& g, Complex p_hat, int depth, const SampleGrid& grid);

/// Same, reusing a prebuilt tree truncated to generation <= depth.
ShadowReport empirical_constant(const BlaschkeProduct& g, const PreimageTree& tree, int depth,
                                const SampleGrid& grid);

/// Constants of the explicit shadowing argument for e^{i theta} z^m.
/// sigma is the sup of |(z - p_hat) / (1 - conj(p_hat) z)| over |z| <= |p_hat|,
/// taken on the circle |z| = |p_hat| with 10^5 samples.
PowerMapConstants theoretical_C0_power(int m, Complex p_hat);

/// The generation-k preimage of p_hat under e^{i theta} z^m that brackets z0:
/// s = r^{1/m^k} <= |z0| < r^{1/m^{k+1}} and phi <= psi <= phi + 2 pi / m^k.
struct Bracket {
  int generation = 0;
  Complex q;
  double delta_r = 0.0;
  double delta_theta = 0.0;
};

Bracket bracket_preimage(int m, double theta, Complex p_hat, Complex z0);

struct AnnulusSpec {
  double r0 = 0.0;
  double epsilon = 0.0;
  /// Sampled minimum of |g'| over the lattice circles in [r0, 1).
  double min_derivative = 0.0;
};

/// Smallest r0 (lattice step 1e-3, refined by bisection to 1e-6) such that the
/// sampled minimum of |g'| on every circle |z| = t, t in [r0, 1), exceeds
/// 1 + epsilon. Throws NotFoundError when even the outermost circle fails.
AnnulusSpec find_expanding_annulus(const BlaschkeProduct& g, double epsilon);

struct AnnulusViolation {
  Complex z;
  Complex preimage;
};

struct AnnulusCheck {
  std::vector<AnnulusViolation> violations;
  std::size_t points_checked = 0;    ///< inside the open annulus
  std::size_t points_excluded = 0;   ///< on or outside its boundary
  std::size_t preimages_checked = 0;
  double worst_margin = 0.0;  ///< min of |q| - |z| over checked pairs (+inf if none)
};

/// Checks |q| > |z| - 1e-12 for every preimage q of z lying in the annulus.
AnnulusCheck verify_annulus_expansion(const BlaschkeProduct& g, const AnnulusSpec& annulus,
                                      std::span<const Complex> points);

/// Same over `samples` points drawn uniformly in radius and angle from the open annulus.
AnnulusCheck verify_annulus_expansion(const BlaschkeProduct& g, const AnnulusSpec& annulus, int samples,
                                      std::uint64_t seed = 0);

struct DensityStep {
  int generation = 0;
  double max_gap = 0.0;
  std::size_t points = 0;
};

/// Largest angular gap among the accumulated outer halves of generations 0..k
/// (nodes of generation j at or above the lower median modulus of generation j).
/// The point sets are nested, so the profile is non-increasing.
std::vector<DensityStep> boundary_density_profile(const PreimageTree& tree);
std::vector<DensityStep> boundary_density_profile(const BlaschkeProduct& g, Complex p_hat, int depth);

}  // namespace fatou
