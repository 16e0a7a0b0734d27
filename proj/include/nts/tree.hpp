#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nts/error.hpp"

namespace nts {

using NodeId = std::uint64_t;
inline constexpr NodeId kNoNode = ~NodeId{0};

// Rooted tree with a designated treasure node. Node ids are dense integers
// 0..n-1; generators place the root at id 0. Immutable after construction,
// safe to share across trial workers.
//
// Degrees are graph degrees: the root's degree is its child count, any other
// node's degree is child count + 1. Neighbor index 0 is the parent (for
// non-root nodes), then children in ascending id order; all uniform draws
// over neighbors use this ordering.
class Tree {
 public:
  static constexpr std::uint64_t kDefaultNodeBudget = 1'000'000;

  static Tree from_parents(std::uint64_t n, NodeId root, NodeId treasure,
                           std::vector<NodeId> parent);

  std::uint64_t size() const { return n_; }
  NodeId root() const { return root_; }
  NodeId treasure() const { return treasure_; }
  void set_treasure(NodeId t);

  NodeId parent(NodeId u) const { return parent_[u]; }
  std::span<const NodeId> children(NodeId u) const {
    return {children_.data() + child_off_[u],
            children_.data() + child_off_[u + 1]};
  }
  std::uint32_t child_count(NodeId u) const {
    return static_cast<std::uint32_t>(child_off_[u + 1] - child_off_[u]);
  }
  std::uint32_t degree(NodeId u) const {
    return child_count(u) + (u == root_ ? 0u : 1u);
  }
  std::uint32_t depth_of(NodeId u) const { return depth_[u]; }
  std::uint32_t depth() const { return max_depth_; }
  std::uint32_t treasure_depth() const { return depth_[treasure_]; }
  bool is_leaf(NodeId u) const { return child_count(u) == 0; }

  std::uint32_t neighbor_count(NodeId u) const { return degree(u); }
  NodeId neighbor(NodeId u, std::uint32_t idx) const {
    if (u != root_) {
      if (idx == 0) return parent_[u];
      return children_[child_off_[u] + idx - 1];
    }
    return children_[child_off_[u] + idx];
  }
  bool adjacent(NodeId u, NodeId v) const {
    return parent_[u] == v || parent_[v] == u;
  }

  // True iff a is an ancestor of u or a == u.
  bool in_subtree(NodeId u, NodeId a) const {
    return tin_[a] <= tin_[u] && tout_[u] <= tout_[a];
  }
  // First edge on the path from `from` toward `to`; from != to.
  NodeId next_hop(NodeId from, NodeId to) const;
  std::uint64_t distance(NodeId u, NodeId v) const;
  NodeId lca(NodeId u, NodeId v) const;

  std::uint64_t leaf_count() const { return leaves_under_[root_]; }
  std::uint64_t leaves_under(NodeId u) const { return leaves_under_[u]; }

  // Euler interval of u's subtree; preorder position of a node is tin(u).
  std::uint32_t tin(NodeId u) const { return tin_[u]; }
  std::uint32_t tout(NodeId u) const { return tout_[u]; }

  std::vector<NodeId> path(NodeId u, NodeId v) const;  // endpoints included

  // Line-oriented text format: header "n root treasure", then one line
  // "node parent" per non-root node. Parser rejects cycles, forests and
  // out-of-range ids.
  std::string to_text() const;
  static Tree from_text(std::string_view text);
  void save(const std::string& path) const;
  static Tree load(const std::string& path);

 private:
  Tree() = default;
  void build_caches();

  std::uint64_t n_ = 0;
  NodeId root_ = 0;
  NodeId treasure_ = 0;
  std::vector<NodeId> parent_;
  std::vector<std::uint32_t> child_off_;
  std::vector<NodeId> children_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint32_t> tin_, tout_;
  std::vector<std::uint64_t> leaves_under_;
  std::uint32_t max_depth_ = 0;
};

// --- Generators -----------------------------------------------------------

struct CompleteParams {
  std::uint32_t branching = 2;       // children per internal node
  std::uint32_t depth = 0;
  std::uint32_t treasure_depth = 0;  // leftmost node at this depth
  std::uint32_t root_children = 0;   // 0 => same as branching
  std::uint64_t budget = Tree::kDefaultNodeBudget;
};

// Complete tree: every internal node has `branching` children except the
// root, whose child count defaults to `branching`.
Tree make_complete(const CompleteParams& p);

// Complete tree of maximal degree `delta` (root has delta children, other
// internal nodes delta-1), filled level by level to exactly `node_count`
// nodes. Treasure at the leftmost deepest node.
Tree make_complete_filled(std::uint32_t delta, std::uint64_t node_count,
                          std::uint64_t budget = Tree::kDefaultNodeBudget);

// Caterpillar: spine of `spine_len` nodes rooted at one end, every spine node
// brought up to total degree `star_degree` with pendant leaves. The treasure
// sits on the spine at depth `treasure_depth`, or on a pendant leaf of the
// last spine node when treasure_depth == spine_len.
Tree make_caterpillar(std::uint32_t spine_len, std::uint32_t star_degree,
                      std::uint32_t treasure_depth,
                      std::uint64_t budget = Tree::kDefaultNodeBudget);

// Complete `branching`-ary tree of the given depth with one root child
// trimmed to a leaf; the treasure is that child (last in the root's child
// list).
Tree make_trimmed(std::uint32_t branching, std::uint32_t depth,
                  std::uint64_t budget = Tree::kDefaultNodeBudget);

// Parsed generator description:
//   complete:<delta>,<depth>[,<tdepth>]      max degree delta
//   completeb:<b>,<depth>[,<tdepth>[,<root>]] explicit branching
//   completen:<delta>,<n>                    filled to n nodes
//   caterpillar:<spine>,<stardeg>[,<tdepth>]
//   trimmed:<b>,<depth>
//   path:<n>[,<tpos>]
//   star:<k>[,<tleaf>]
struct GeneratorSpec {
  enum class Kind { kComplete, kFilled, kCaterpillar, kTrimmed };
  Kind kind = Kind::kComplete;
  // kComplete
  std::uint32_t root_children = 0, branching = 0, depth = 0,
                treasure_depth = 0;
  // kFilled
  std::uint32_t delta = 0;
  std::uint64_t count = 0;
  // kCaterpillar (treasure_depth shared)
  std::uint32_t spine = 0, star = 0;
  // kTrimmed
  std::uint32_t trim_branching = 0, trim_depth = 0;
  NodeId treasure_override = kNoNode;

  bool complete_family() const {
    return kind == Kind::kComplete || kind == Kind::kFilled;
  }
};

GeneratorSpec parse_generator(std::string_view spec);
Tree materialize(const GeneratorSpec& g,
                 std::uint64_t budget = Tree::kDefaultNodeBudget);
Tree make_from_spec(std::string_view spec,
                    std::uint64_t budget = Tree::kDefaultNodeBudget);

// --- Structural quantities -------------------------------------------------

// Product of degrees on [root,u); beta(root) == 1 so sums may range over all
// nodes. Prefer log_beta in scoring code.
double beta(const Tree& t, NodeId u);
double log_beta(const Tree& t, NodeId u);

// Probability that a top-down uniform walk from the root passes through u:
// theta(root)=1, theta(u) = 1 / (deg(root) * prod (deg(w)-1)) over inner path
// nodes w.
double theta(const Tree& t, NodeId u);

// (sum c^d(v)/beta(v), sum d(v) c^d(v)/beta(v)); the first is <= 1/(1-c) and
// the second <= c/(1-c)^2 for any tree and 0<c<1.
std::pair<double, double> weighted_sums_check(const Tree& t, double c);

std::uint32_t max_degree(const Tree& t);

// Fixed breadth-first ordering from the root (children in id order).
std::vector<NodeId> bfs_order(const Tree& t);

// --- Centroid decomposition ------------------------------------------------

// Recursive separator decomposition: each node's separator splits its
// component into pieces of at most half the size; depth <= ceil(log2 n).
struct SeparatorTree {
  struct Node {
    NodeId separator = kNoNode;
    int parent = -1;
    std::vector<int> children;
    std::vector<NodeId> component;  // sorted
    std::uint32_t level = 0;
  };
  std::vector<Node> nodes;
  int root = -1;
  std::uint32_t max_level = 0;

  static bool contains(const Node& nd, NodeId u);
};

SeparatorTree centroid_decomposition(const Tree& t);

}  // namespace nts
