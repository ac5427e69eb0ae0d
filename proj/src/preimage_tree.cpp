#include "fatou/preimage_tree.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "fatou/parallel.hpp"

namespace fatou {

std::size_t PreimageTree::prefix_size(int k) const {
  auto it = std::upper_bound(nodes.begin(), nodes.end(), k,
                             [](int g, const TreeNode& n) { return g < n.generation; });
  return static_cast<std::size_t>(it - nodes.begin());
}

double PreimageTree::max_modulus(int max_generation) const {
  double m = 0.0;
  for (std::size_t i = 0, n = prefix_size(max_generation); i < n; ++i) m = std::max(m, std::abs(nodes[i].z));
  return m;
}

namespace {

// Uniform-grid spatial index; cells are larger than the dedup radius so a
// match can only sit in the 3x3 block around a query.
class PointIndex {
 public:
  std::int64_t find(const std::vector<TreeNode>& nodes, Complex z) const {
    const auto [cx, cy] = cell(z);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find(Key{cx + dx, cy + dy});
        if (it == cells_.end()) continue;
        for (auto idx : it->second)
          if (std::abs(nodes[idx].z - z) < kDedupRadius) return idx;
      }
    }
    return -1;
  }

  void insert(Complex z, std::int64_t idx) { cells_[key(z)].push_back(idx); }

  void move(Complex from, Complex to, std::int64_t idx) {
    auto& v = cells_[key(from)];
    v.erase(std::remove(v.begin(), v.end(), idx), v.end());
    insert(to, idx);
  }

 private:
  struct Key {
    std::int64_t x, y;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return std::hash<std::int64_t>{}(k.x * 0x9E3779B97F4A7C15LL ^ k.y);
    }
  };
  static constexpr double kCell = 1e-9;

  static std::pair<std::int64_t, std::int64_t> cell(Complex z) {
    return {static_cast<std::int64_t>(std::floor(z.real() / kCell)),
            static_cast<std::int64_t>(std::floor(z.imag() / kCell))};
  }
  static Key key(Complex z) {
    auto [x, y] = cell(z);
    return Key{x, y};
  }

  std::unordered_map<Key, std::vector<std::int64_t>, KeyHash> cells_;
};

}  // namespace

PreimageTree build_preimage_tree(Complex base, int depth, const PreimageSolver& solve, std::size_t node_cap) {
  if (depth < 0) throw DomainError("tree depth must be non-negative");
  if (!is_finite(base)) throw DomainError("base point is not finite");

  PreimageTree tree;
  tree.base = base;
  tree.depth = depth;
  tree.nodes.push_back(TreeNode{base, 0, -1, 0.0});

  PointIndex index;
  index.insert(base, 0);

  std::size_t frontier_begin = 0;
  std::size_t frontier_end = 1;
  for (int k = 1; k <= depth; ++k) {
    const std::size_t count = frontier_end - frontier_begin;
    std::vector<std::vector<PreimageRoot>> solved(count);
    parallel_for(count, [&](std::size_t i) { solved[i] = solve(tree.nodes[frontier_begin + i].z); }, 16);

    for (std::size_t i = 0; i < count; ++i) {
      const auto parent = static_cast<std::int64_t>(frontier_begin + i);
      for (const auto& root : solved[i]) {
        const std::int64_t hit = index.find(tree.nodes, root.z);
        if (hit >= 0) {
          TreeNode& existing = tree.nodes[static_cast<std::size_t>(hit)];
          if (existing.generation == k && lex_less(root.z, existing.z)) {
            index.move(existing.z, root.z, hit);
            existing.z = root.z;
            existing.parent = parent;
            existing.residual = root.residual;
          }
          continue;
        }
        if (tree.nodes.size() >= node_cap)
          throw CapacityError("preimage tree exceeds node cap of " + std::to_string(node_cap) +
                                  " while building generation " + std::to_string(k),
                              k - 1);
        index.insert(root.z, static_cast<std::int64_t>(tree.nodes.size()));
        tree.nodes.push_back(TreeNode{root.z, k, parent, root.residual});
      }
    }
    frontier_begin = frontier_end;
    frontier_end = tree.nodes.size();
  }
  return tree;
}

}  // namespace fatou
