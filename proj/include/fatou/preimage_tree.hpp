#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fatou/types.hpp"

namespace fatou {

inline constexpr std::size_t kDefaultNodeCap = 1'000'000;
inline constexpr double kDedupRadius = 1e-10;

struct TreeNode {
  Complex z;
  int generation = 0;
  std::int64_t parent = -1;  ///< index into PreimageTree::nodes, -1 for the base point
  double residual = 0.0;     ///< |map(z) - parent| from the solve that produced z
};

/// Generation-labelled inverse orbit of a base point, up to some depth.
/// Nodes are stored generation by generation; within a generation they follow
/// parent order and then the solver's (lexicographic) root order. A tree of
/// depth d is therefore an exact prefix of the same tree built to depth d+1.
struct PreimageTree {
  Complex base;
  int depth = 0;
  std::vector<TreeNode> nodes;

  std::size_t size() const { return nodes.size(); }
  /// Number of nodes with generation <= k.
  std::size_t prefix_size(int k) const;
  double max_modulus(int max_generation) const;
  double max_modulus() const { return max_modulus(depth); }
};

struct PreimageRoot {
  Complex z;
  double residual;
};

/// Returns every preimage of w (with multiplicity) under the map.
using PreimageSolver = std::function<std::vector<PreimageRoot>(Complex w)>;

/// Breadth-first construction of the union of map^{-k}(base), k <= depth.
/// Points closer than kDedupRadius to an existing node are merged into it; the
/// node with the smaller generation wins, then the lexicographically smaller
/// coordinates. Only newly created nodes are expanded, since the preimages of a
/// merged duplicate are already present one generation earlier.
/// Throws CapacityError once the node count would exceed node_cap.
PreimageTree build_preimage_tree(Complex base, int depth, const PreimageSolver& solve,
                                 std::size_t node_cap = kDefaultNodeCap);

}  // namespace fatou
