#include "doctest.h"

#include <algorithm>

#include "fatou/blaschke.hpp"
#include "fatou/preimage_tree.hpp"
#include "test_support.hpp"

using namespace fatou;
using namespace fatou::testing;

namespace {
std::vector<Complex> generation(const PreimageTree& tree, int k) {
  std::vector<Complex> out;
  for (const auto& n : tree.nodes)
    if (n.generation == k) out.push_back(n.z);
  return out;
}
}  // namespace

TEST_CASE("small trees") {
  const BlaschkeProduct sq = BlaschkeProduct::power_map(2);
  const PreimageTree t = preimage_tree(sq, 0.5, 2);
  CHECK(t.size() == 7);
  CHECK(t.prefix_size(0) == 1);
  CHECK(t.prefix_size(1) == 3);
  CHECK(t.nodes[0].parent == -1);
  CHECK(t.nodes[0].z == Complex{0.5, 0.0});

  // 0 is its own preimage under z (z - 0.5) / (1 - 0.5 z): it stays at generation 0.
  const PreimageTree h = preimage_tree(BlaschkeProduct(0.0, {0.0, 0.5}), 0.0, 1);
  REQUIRE(h.size() == 2);
  CHECK(h.nodes[0].generation == 0);
  CHECK(std::abs(h.nodes[0].z) == 0.0);
  CHECK(h.nodes[1].generation == 1);
  CHECK(std::abs(h.nodes[1].z - 0.5) < 1e-12);

  const PreimageTree fixed = preimage_tree(sq, 0.0, 5);
  CHECK(fixed.size() == 1);
}

TEST_CASE("depth 12 tree of z^2") {
  const PreimageTree t = preimage_tree(BlaschkeProduct::power_map(2), 0.5, 12);
  CHECK(t.size() == 8191);
  CHECK(t.max_modulus() == doctest::Approx(std::pow(0.5, 1.0 / 4096.0)).epsilon(1e-14));
  CHECK(std::pow(0.5, 1.0 / 4096.0) == doctest::Approx(0.99983).epsilon(1e-5));
}

TEST_CASE("capacity guard reports the last complete generation") {
  try {
    preimage_tree(BlaschkeProduct::power_map(2), 0.5, 20, 1000);
    FAIL("expected CapacityError");
  } catch (const CapacityError& e) {
    CHECK(e.depth_reached() == 8);  // 511 nodes fit, 1023 do not
  }
}

TEST_CASE("a shallower tree is an exact prefix of a deeper one") {
  const BlaschkeProduct g(0.4, {0.0, Complex{0.3, -0.2}, Complex{-0.5, 0.1}});
  const PreimageTree a = preimage_tree(g, Complex{0.2, 0.1}, 4);
  const PreimageTree b = preimage_tree(g, Complex{0.2, 0.1}, 5);
  REQUIRE(b.prefix_size(4) == a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.nodes[i].z == b.nodes[i].z);
    CHECK(a.nodes[i].generation == b.nodes[i].generation);
    CHECK(a.nodes[i].parent == b.nodes[i].parent);
  }
}

TEST_CASE("every node maps back to its parent and k steps to the base") {
  std::mt19937_64 rng(21);
  for (int p = 0; p < 8; ++p) {
    const BlaschkeProduct g = random_product(rng, 4, p % 2 == 0, 0.8);
    const Complex base = random_in_disk(rng, 0.8);
    const PreimageTree t = preimage_tree(g, base, 5);
    for (const auto& n : t.nodes) {
      if (n.parent < 0) continue;
      CHECK(std::abs(eval(g, n.z) - t.nodes[n.parent].z) <= 1e-10);
      CHECK(std::abs(iterate(g, n.z, n.generation) - base) <= 1e-8 * n.generation);
    }
  }
}

TEST_CASE("numerical tree agrees with the explicit power-map formula") {
  for (int m = 2; m <= 3; ++m) {
    const BlaschkeProduct g = BlaschkeProduct::power_map(m, 0.3);
    const Complex p_hat = std::polar(0.7, -0.4);
    const PreimageTree t = preimage_tree(g, p_hat, 6);
    for (int k = 0; k <= 6; ++k) {
      const auto explicit_set = power_map_preimages(m, 0.3, p_hat, k);
      const auto numeric = generation(t, k);
      CHECK(numeric.size() == explicit_set.size());
      CHECK(hausdorff(numeric, explicit_set) <= 1e-10);
    }
  }
}

TEST_CASE("construction is deterministic") {
  const BlaschkeProduct g(1.0, {0.0, Complex{0.6, 0.3}});
  const PreimageTree a = preimage_tree(g, 0.3, 8);
  const PreimageTree b = preimage_tree(g, 0.3, 8);
  REQUIRE(a.size() == b.size());
  CHECK(std::equal(a.nodes.begin(), a.nodes.end(), b.nodes.begin(), [](const TreeNode& x, const TreeNode& y) {
    return x.z == y.z && x.generation == y.generation && x.parent == y.parent;
  }));
}

TEST_CASE("generic solver interface and duplicates") {
  // z -> z^2 written as a custom solver with a deliberately repeated root.
  auto solve = [](Complex w) {
    const Complex s = std::sqrt(w);
    return std::vector<PreimageRoot>{{s, 0.0}, {s, 0.0}, {-s, 0.0}};
  };
  const PreimageTree t = build_preimage_tree(0.25, 2, solve);
  CHECK(t.size() == 7);
  CHECK_THROWS_AS(build_preimage_tree(0.25, -1, solve), DomainError);
}
