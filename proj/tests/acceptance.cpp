// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Tolerances and budgets are pinned here and must not be relaxed.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "fatou/blaschke.hpp"
#include "fatou/cli/commands.hpp"
#include "fatou/cli/config.hpp"
#include "fatou/hyperbolic.hpp"
#include "fatou/polydyn.hpp"
#include "fatou/shadowing.hpp"
#include "test_support.hpp"

using namespace fatou;
using namespace fatou::testing;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Sampling radius for the random-pair suites. Absolute 1e-12 agreement is
// below the conditioning of the distance once 1 - |z| gets much smaller.
constexpr double kSampleRadius = 0.95;

// --- 1 -----------------------------------------------------------------------
Verdict distance_suite() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(0);
  double worst_triangle = 0.0, worst_invariance = 0.0;
  bool symmetric = true;
  for (int i = 0; i < 10000; ++i) {
    const Complex z = random_in_disk(rng, kSampleRadius);
    const Complex w = random_in_disk(rng, kSampleRadius);
    const Complex u = random_in_disk(rng, kSampleRadius);
    const Complex a = random_in_disk(rng, kSampleRadius);
    const double dzw = poincare_distance(z, w);
    symmetric = symmetric && dzw == poincare_distance(w, z);
    worst_triangle = std::max(worst_triangle, poincare_distance(z, u) - dzw - poincare_distance(w, u));
    worst_invariance =
        std::max(worst_invariance, std::abs(poincare_distance(mobius_to_zero(a, z), mobius_to_zero(a, w)) - dzw));
  }
  const double elapsed = seconds_since(t0);
  v.require(symmetric, "symmetry not exact");
  v.require(worst_triangle <= 1e-12, "triangle excess " + fmt(worst_triangle));
  v.require(worst_invariance <= 1e-12, "invariance error " + fmt(worst_invariance));
  v.require(elapsed < 1.0, "runtime " + fmt(elapsed) + " s");
  v.detail += (v.detail.empty() ? "" : " | ") + std::string("triangle excess ") + fmt(worst_triangle) +
              ", invariance error " + fmt(worst_invariance) + ", " + fmt(elapsed) + " s";
  return v;
}

// --- 2 -----------------------------------------------------------------------
Verdict schwarz_pick() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(0);
  double worst = -INFINITY;
  for (int p = 0; p < 50; ++p) {
    const BlaschkeProduct g = random_product(rng, 6, false);
    for (int i = 0; i < 10000; ++i) {
      const Complex z = random_in_disk(rng, kSampleRadius);
      const Complex w = random_in_disk(rng, kSampleRadius);
      worst = std::max(worst, poincare_distance(eval(g, z), eval(g, w)) - poincare_distance(z, w));
    }
  }
  const double elapsed = seconds_since(t0);
  v.require(worst <= 1e-12, "expansion " + fmt(worst));
  v.require(elapsed < 10.0, "runtime " + fmt(elapsed) + " s");
  v.detail += (v.detail.empty() ? "" : " | ") + std::string("max d(g z, g w) - d(z, w) = ") + fmt(worst) + ", " +
              fmt(elapsed) + " s";
  return v;
}

// --- 3 -----------------------------------------------------------------------
Verdict boundary_derivative() {
  Verdict v;
  std::mt19937_64 rng(0);
  double worst_rel = 0.0, worst_margin = INFINITY;
  const double h = 1e-5;
  for (int p = 0; p < 50; ++p) {
    // Half of them are pure power maps, the rest carry nonzero zeros.
    const BlaschkeProduct g = p % 5 == 0 ? BlaschkeProduct::power_map(2 + p % 4, p * 0.1)
                                         : random_product(rng, 6, true, 0.9);
    const int m1 = g.origin_multiplicity();
    double min_mod = INFINITY;
    for (int j = 0; j < 1000; ++j) {
      const double t = 2.0 * kPi * (j + 0.5) / 1000.0;
      const double closed = boundary_derivative_modulus(g, std::polar(1.0, t));
      // Central difference of the boundary parametrisation t -> g(e^{it}).
      const double fd = std::abs(eval(g, std::polar(1.0, t + h)) - eval(g, std::polar(1.0, t - h))) / (2.0 * h);
      worst_rel = std::max(worst_rel, std::abs(fd - closed) / closed);
      min_mod = std::min(min_mod, closed);
    }
    v.require(min_mod > 1.0, "minimum modulus " + fmt(min_mod) + " not above 1");
    if (!g.is_power_map()) {
      v.require(min_mod > m1, "minimum modulus " + fmt(min_mod) + " not above m1");
      worst_margin = std::min(worst_margin, min_mod - m1);
    }
  }
  v.require(worst_rel <= 1e-6, "finite-difference mismatch " + fmt(worst_rel));
  v.detail += (v.detail.empty() ? "" : " | ") + std::string("worst relative FD error ") + fmt(worst_rel) +
              ", smallest min|g'| - m1 " + fmt(worst_margin);
  return v;
}

// --- 4 -----------------------------------------------------------------------
Verdict preimage_oracle() {
  Verdict v;
  double worst_h = 0.0, worst_return = 0.0;
  for (int m = 2; m <= 3; ++m) {
    for (const auto& [theta, p_hat] : {std::pair{0.0, Complex{0.5, 0.0}}, std::pair{1.3, std::polar(0.3, -2.0)}}) {
      const BlaschkeProduct g = BlaschkeProduct::power_map(m, theta);
      const PreimageTree tree = preimage_tree(g, p_hat, 5);
      for (int k = 0; k <= 5; ++k) {
        std::vector<Complex> numeric;
        for (const auto& n : tree.nodes)
          if (n.generation == k) numeric.push_back(n.z);
        const auto explicit_set = power_map_preimages(m, theta, p_hat, k);
        v.require(numeric.size() == explicit_set.size(), "generation size mismatch");
        worst_h = std::max(worst_h, hausdorff(numeric, explicit_set));
      }
    }
  }
  // Forward return for general products too.
  std::mt19937_64 rng(0);
  for (int p = 0; p < 10; ++p) {
    const BlaschkeProduct g = random_product(rng, 4, p % 2 == 0, 0.9);
    const Complex base = random_in_disk(rng, 0.9);
    const PreimageTree tree = preimage_tree(g, base, 5);
    for (const auto& n : tree.nodes) {
      if (n.generation == 0) continue;
      const double drift = std::abs(iterate(g, n.z, n.generation) - base);
      worst_return = std::max(worst_return, drift / n.generation);
    }
  }
  v.require(worst_h <= 1e-8, "Hausdorff distance " + fmt(worst_h));
  v.require(worst_return <= 1e-7, "return drift per generation " + fmt(worst_return));
  v.detail += (v.detail.empty() ? "" : " | ") + std::string("Hausdorff ") + fmt(worst_h) + ", drift/generation " +
              fmt(worst_return);
  return v;
}

// --- 5 -----------------------------------------------------------------------
Verdict power_constants() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const PowerMapConstants c = theoretical_C0_power(2, 0.5);
  v.require(std::abs(c.sigma - 0.8) <= 1e-6, "sigma " + fmt(c.sigma));
  v.require(std::abs(c.c_prime - std::log(9.0)) <= 1e-6, "C'0 " + fmt(c.c_prime));
  v.require(std::abs(c.c_doubleprime - 25.679) <= 1e-2, "C''0 " + fmt(c.c_doubleprime));

  const BlaschkeProduct g = BlaschkeProduct::power_map(2);
  const PreimageTree tree = preimage_tree(g, 0.5, 12);
  const SampleGrid grid = SampleGrid::shells(12, 256);
  const ShadowReport report = empirical_constant(g, tree, 12, grid);
  v.require(report.overflow_count == 0, "overflow samples");

  std::size_t checked = 0, not_in_tree = 0;
  double worst_gap = -INFINITY, worst_bound = 0.0;
  for (Complex z0 : grid.points()) {
    if (std::abs(z0) <= 0.5) continue;
    const Bracket b = bracket_preimage(2, 0.0, 0.5, z0);
    const double d = poincare_distance(z0, b.q);
    const double bound = radial_arc_bound(2, 0.5, z0, b.q);
    worst_gap = std::max(worst_gap, d - bound);
    worst_bound = std::max(worst_bound, bound);
    v.require(d <= bound + 1e-10, "d > bound at " + fmt(z0.real()) + " " + fmt(z0.imag()));
    v.require(bound <= c.c_doubleprime + 1e-6, "bound above C''0 at " + fmt(z0.real()) + " " + fmt(z0.imag()));
    const bool in_tree = std::any_of(tree.nodes.begin(), tree.nodes.end(), [&](const TreeNode& n) {
      return n.generation == b.generation && std::abs(n.z - b.q) <= 1e-10;
    });
    not_in_tree += in_tree ? 0 : 1;
    ++checked;
  }
  v.require(not_in_tree == 0, std::to_string(not_in_tree) + " bracket points missing from the tree");
  const double elapsed = seconds_since(t0);
  v.require(elapsed < 30.0, "runtime " + fmt(elapsed) + " s");
  v.detail += (v.detail.empty() ? "" : " | ") + std::string("sigma ") + fmt(c.sigma) + ", C'0 " + fmt(c.c_prime) +
              ", C''0 " + fmt(c.c_doubleprime) + ", " + std::to_string(checked) + " samples, max bound " +
              fmt(worst_bound) + ", max d - bound " + fmt(worst_gap) + ", empirical sup " +
              fmt(report.empirical_sup) + ", " + fmt(elapsed) + " s";
  return v;
}

// --- 6 -----------------------------------------------------------------------
Verdict empirical_shadowing() {
  Verdict v;
  const SampleGrid grid = SampleGrid::shells(12, 256);
  const double c0 = theoretical_C0_power(2, 0.5).c0;
  struct Case {
    const char* name;
    BlaschkeProduct g;
    Complex base;
  };
  const Case cases[] = {{"z^2", BlaschkeProduct::power_map(2), 0.5},
                        {"{0, 0.5}", BlaschkeProduct(0.0, {0.0, 0.5}), 0.0}};
  std::string summary;
  for (const auto& c : cases) {
    const PreimageTree tree = preimage_tree(c.g, c.base, 14);
    std::vector<double> sups;
    for (int depth = 0; depth <= 14; ++depth) sups.push_back(empirical_constant(c.g, tree, depth, grid).empirical_sup);
    for (int depth = 1; depth <= 14; ++depth)
      v.require(sups[depth] <= sups[depth - 1],
                std::string(c.name) + " sup increases at depth " + std::to_string(depth));
    if (c.g.is_power_map())
      for (double s : sups) v.require(s <= c0, std::string(c.name) + " sup " + fmt(s) + " above C0");
    const double drift = std::abs(sups[12] - sups[14]);
    v.require(drift < 0.05, std::string(c.name) + " |sup12 - sup14| = " + fmt(drift));
    summary += std::string(summary.empty() ? "" : "; ") + c.name + " sup(12) " + fmt(sups[12]) + ", sup(14) " +
               fmt(sups[14]);
  }
  v.detail += (v.detail.empty() ? "" : " | ") + summary;
  return v;
}

// --- 7 -----------------------------------------------------------------------
Verdict annulus_expansion() {
  Verdict v;
  const BlaschkeProduct maps[] = {BlaschkeProduct::power_map(2), BlaschkeProduct::power_map(3),
                                  BlaschkeProduct(0.0, {0.0, 0.5})};
  std::string summary;
  for (const auto& g : maps) {
    const AnnulusSpec a = find_expanding_annulus(g, 0.01);
    const AnnulusCheck c = verify_annulus_expansion(g, a, 10000, 0);
    v.require(c.points_checked == 10000, "not every sample landed in the annulus");
    for (const auto& bad : c.violations)
      v.require(false, "violation at " + fmt(bad.z.real()) + " " + fmt(bad.z.imag()));
    summary += std::string(summary.empty() ? "" : "; ") + "r0 " + fmt(a.r0) + " worst margin " + fmt(c.worst_margin);
  }
  v.detail += (v.detail.empty() ? "" : " | ") + summary;
  return v;
}

// --- 8 -----------------------------------------------------------------------
Verdict density_profile() {
  Verdict v;
  const auto sq = boundary_density_profile(BlaschkeProduct::power_map(2), 0.5, 12);
  double worst = 0.0;
  for (const auto& step : sq)
    worst = std::max(worst, std::abs(step.max_gap - 2.0 * kPi / std::ldexp(1.0, step.generation)));
  v.require(worst <= 1e-12, "z^2 gap error " + fmt(worst));

  // From generation 1 on: the base point 0 is a zero, so generation 1 adds 0.5 only.
  const auto half = boundary_density_profile(BlaschkeProduct(0.0, {0.0, 0.5}), 0.0, 10);
  for (int k = 2; k <= 10; ++k)
    v.require(half[k].max_gap < half[k - 1].max_gap, "{0, 0.5} not strictly decreasing at " + std::to_string(k));
  v.detail += (v.detail.empty() ? "" : " | ") + std::string("z^2 max error ") + fmt(worst) + ", {0, 0.5} gaps " +
              fmt(half[1].max_gap) + " -> " + fmt(half[10].max_gap);
  return v;
}

// --- 9 -----------------------------------------------------------------------
Verdict renderer() {
  Verdict v;
  const Polynomial f({0.0, 0.0, 1.0});
  const Viewport view{0.0, 3.0, 3.0};
  const auto t0 = std::chrono::steady_clock::now();
  const RenderResult first = render_basin(f, view, 512, 512, 1000);
  const double elapsed = seconds_since(t0);
  const RenderResult second = render_basin(f, view, 512, 512, 1000);

  std::size_t inner = 0, inner_ok = 0, outer = 0, outer_ok = 0;
  for (int y = 0; y < 512; ++y) {
    for (int x = 0; x < 512; ++x) {
      const double mod = std::abs(pixel_center(view, 512, 512, x, y));
      const OrbitOutcome& px = first.raster.at(x, y);
      if (mod < 0.98) {
        ++inner;
        inner_ok += px.kind == OrbitOutcome::Kind::attractor && px.attractor == 0;
      } else if (mod > 1.02) {
        ++outer;
        outer_ok += px.kind == OrbitOutcome::Kind::escaped;
      }
    }
  }
  const double inner_frac = static_cast<double>(inner_ok) / inner;
  const double outer_frac = static_cast<double>(outer_ok) / outer;
  v.require(inner_frac >= 0.99, "interior fraction " + fmt(inner_frac));
  v.require(outer_frac >= 0.99, "exterior fraction " + fmt(outer_frac));
  v.require(encode_ppm(first.image) == encode_ppm(second.image), "images differ between runs");
  v.require(encode_pixel_csv(first.raster) == encode_pixel_csv(second.raster), "pixel tables differ between runs");
  v.require(elapsed < 10.0, "runtime " + fmt(elapsed) + " s");
  v.detail += (v.detail.empty() ? "" : " | ") + std::string("interior ") + fmt(inner_frac) + ", exterior " +
              fmt(outer_frac) + ", " + fmt(elapsed) + " s";
  return v;
}

// --- 10 ----------------------------------------------------------------------
Verdict cli_contract() {
  Verdict v;
  using namespace fatou::cli;
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    RunConfig c;
    c.command = "shadow";
    BlaschkeSpec b{u(rng) * 7.0, {}};
    for (int k = 0; k < 2 + i % 5; ++k) b.zeros.push_back(random_in_disk(rng, 0.99));
    c.map = b;
    c.base_point = random_in_disk(rng, 0.9);
    c.depth = i % 15;
    c.grid = GridSpec{0, 0, {random_in_disk(rng, 0.999), random_in_disk(rng, 0.999)}};
    c.epsilon = std::ldexp(std::abs(u(rng)), -(i % 40));
    c.seed = rng();
    // Through text: this is what a config file holds.
    mismatches += parse_config_text(to_json(c).dump()) == c ? 0 : 1;
  }
  v.require(mismatches == 0, std::to_string(mismatches) + " configs changed on round trip");

  const fs::path dir = fs::temp_directory_path() / ("fatou_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto exit_code = [&](const std::string& command, const std::string& json) {
    const fs::path cfg = dir / (command + ".json");
    std::ofstream(cfg) << json;
    std::ostringstream out, err;
    return run({command, "--config", cfg.string()}, out, err);
  };
  const std::string square = R"("blaschke": {"zeros": [[0, 0], [0, 0]]})";
  const std::pair<int, int> codes[] = {
      {exit_code("preimages", "{" + square + R"(, "base_point": [0.5, 0], "depth": 3})"), 0},
      {exit_code("preimages", R"({"blaschke": {"zeros": [[0, 0], [0.5]]}})"), 2},
      {exit_code("verify", "{" + square + R"(, "epsilon": 10, "base_point": [0.5, 0], "depth": 4})"), 3},
      {exit_code("verify", "{" + square + R"(, "base_point": [0, 0], "depth": 4, "samples": 200})"), 4},
      {exit_code("render", R"({"polynomial": {"coefficients": [[0, 0], [0, 0], [1, 0]]},
                               "viewport": {"center": [0, 0], "width": 3, "height": 3}, "resolution": [4, 4],
                               "output": ")" + (dir / "missing" / "x.ppm").string() + R"("})"),
       5},
  };
  for (const auto& [got, want] : codes)
    v.require(got == want, "expected exit " + std::to_string(want) + ", got " + std::to_string(got));
  fs::remove_all(dir);
  v.detail += (v.detail.empty() ? "" : " | ") + std::string("1000 configs round-tripped, exit codes 0/2/3/4/5 seen");
  return v;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"1 distance: symmetry, triangle, invariance", distance_suite},
      {"2 Schwarz-Pick for random products", schwarz_pick},
      {"3 boundary derivative closed form", boundary_derivative},
      {"4 preimage trees vs explicit formula", preimage_oracle},
      {"5 power-map constants and bracket chain", power_constants},
      {"6 empirical shadowing constant", empirical_shadowing},
      {"7 inverse branches expand on the annulus", annulus_expansion},
      {"8 boundary density profile", density_profile},
      {"9 basin renderer", renderer},
      {"10 CLI round trip and exit codes", cli_contract},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failures += v.pass ? 0 : 1;
    std::printf("%s criterion %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
