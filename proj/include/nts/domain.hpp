#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nts/noise.hpp"
#include "nts/tree.hpp"

// Walking algorithms and the memoryless walker run against a "domain": the
// rooted tree view they are allowed to see, plus the advice of one trial.
// Two implementations share that shape:
//   FullDomain            a materialized Tree (advice stored or hashed)
//   VirtualCompleteDomain complete-ary topology by arithmetic, advice hashed
// Both produce bit-identical trials for the same seed, which lets experiments
// on complete trees far beyond the materialization budget run exactly the
// algorithm the small-tree tests verify.

namespace nts {

// Advice lookup for materialized trees: either a sampled assignment or the
// per-node hashed draw (identical to what sample_advice would produce).
class AdviceView {
 public:
  static AdviceView stored(const Tree& t, const Advice& a) {
    AdviceView v;
    v.tree_ = &t;
    v.stored_ = &a;
    return v;
  }
  static AdviceView hashed(const Tree& t, const NoiseModel& m,
                           std::uint64_t trial_seed) {
    AdviceView v;
    v.tree_ = &t;
    v.model_ = &m;
    v.seed_ = trial_seed;
    return v;
  }

  NodeId operator()(NodeId u) const {
    if (stored_) return stored_->pointer[u];
    return advice_at(*tree_, *model_, seed_, u);
  }

  const Tree& tree() const { return *tree_; }

 private:
  const Tree* tree_ = nullptr;
  const Advice* stored_ = nullptr;
  const NoiseModel* model_ = nullptr;
  std::uint64_t seed_ = 0;
};

class FullDomain {
 public:
  FullDomain(const Tree& t, AdviceView adv) : t_(&t), adv_(std::move(adv)) {}

  NodeId root() const { return t_->root(); }
  NodeId treasure() const { return t_->treasure(); }
  NodeId parent_of(NodeId u) const { return t_->parent(u); }
  std::uint32_t depth_of(NodeId u) const { return t_->depth_of(u); }
  std::uint32_t orig_degree(NodeId u) const { return t_->degree(u); }
  std::uint32_t neighbor_count(NodeId u) const { return t_->degree(u); }
  NodeId neighbor(NodeId u, std::uint32_t i) const { return t_->neighbor(u, i); }

  template <class F>
  void children_of(NodeId u, F&& f) const {
    for (NodeId c : t_->children(u)) f(c);
  }

  NodeId advice(NodeId u) const { return adv_(u); }

  bool has_leaf_weights() const { return true; }
  double log_leaf_fraction(NodeId u) const {
    return std::log(static_cast<double>(t_->leaves_under(u))) -
           std::log(static_cast<double>(t_->leaf_count()));
  }

  const Tree& tree() const { return *t_; }

 private:
  const Tree* t_;
  AdviceView adv_;
};

// Complete-ary topology computed on demand: root has `root_children`
// children, every deeper internal node `branching`. Ids are breadth-first,
// matching make_complete, so materialized and virtual runs agree node by
// node. `size` may cut the last level short (make_complete_filled layout).
struct CompleteShape {
  std::uint32_t root_children = 0;
  std::uint32_t branching = 0;
  std::uint32_t depth = 0;
  std::uint32_t treasure_depth = 0;
  std::uint64_t size = 0;
  std::vector<std::uint64_t> level_off;  // depth+2 entries; [d], one past end

  static CompleteShape make(std::uint32_t root_children,
                            std::uint32_t branching, std::uint32_t depth,
                            std::uint32_t treasure_depth);
  // Shape of make_complete_filled(delta, n).
  static CompleteShape make_filled(std::uint32_t delta, std::uint64_t n);

  std::uint32_t depth_of(NodeId u) const {
    std::uint32_t d = 0;
    while (u >= level_off[d + 1]) ++d;
    return d;
  }
  NodeId parent(NodeId u) const {
    if (u == 0) return kNoNode;
    std::uint32_t d = depth_of(u);
    std::uint64_t i = u - level_off[d];
    return d == 1 ? 0 : level_off[d - 1] + i / branching;
  }
  std::uint32_t child_count(NodeId u) const {
    std::uint32_t d = depth_of(u);
    if (d >= depth) return 0;
    std::uint32_t b = (d == 0) ? root_children : branching;
    std::uint64_t i = u - level_off[d];
    std::uint64_t first = level_off[d + 1] + i * b;
    if (first >= size) return 0;
    return static_cast<std::uint32_t>(
        std::min<std::uint64_t>(b, size - first));
  }
  NodeId child(NodeId u, std::uint32_t j) const {
    std::uint32_t d = depth_of(u);
    std::uint32_t b = (d == 0) ? root_children : branching;
    std::uint64_t i = u - level_off[d];
    return level_off[d + 1] + i * b + j;
  }
  std::uint32_t degree(NodeId u) const {
    return child_count(u) + (u == 0 ? 0u : 1u);
  }
  NodeId treasure() const {
    return size == 1 ? 0 : level_off[treasure_depth];
  }
  // The treasure sits on the all-leftmost path: index 0 of every level.
  bool is_treasure_ancestor(NodeId u) const {
    std::uint32_t d = depth_of(u);
    return d <= treasure_depth && u == level_off[d];
  }
};

enum class VirtualAdversary { kNone, kToRoot, kToFirstChild };

class VirtualCompleteDomain {
 public:
  // q_coef / q_scale: node fault probability is q_coef when degree_scaled is
  // false, q_coef / degree(u) otherwise.
  VirtualCompleteDomain(CompleteShape shape, std::uint64_t trial_seed,
                        double q_coef, bool degree_scaled,
                        VirtualAdversary adversary)
      : shape_(std::move(shape)),
        seed_(trial_seed),
        q_coef_(q_coef),
        degree_scaled_(degree_scaled),
        adversary_(adversary) {}

  NodeId root() const { return 0; }
  NodeId treasure() const { return shape_.treasure(); }
  NodeId parent_of(NodeId u) const { return shape_.parent(u); }
  std::uint32_t depth_of(NodeId u) const { return shape_.depth_of(u); }
  std::uint32_t orig_degree(NodeId u) const { return shape_.degree(u); }
  std::uint32_t neighbor_count(NodeId u) const { return shape_.degree(u); }
  NodeId neighbor(NodeId u, std::uint32_t i) const {
    if (u != 0) return i == 0 ? shape_.parent(u) : shape_.child(u, i - 1);
    return shape_.child(u, i);
  }

  template <class F>
  void children_of(NodeId u, F&& f) const {
    std::uint32_t c = shape_.child_count(u);
    for (std::uint32_t j = 0; j < c; ++j) f(shape_.child(u, j));
  }

  NodeId advice(NodeId u) const {
    NodeId tau = shape_.treasure();
    if (u == tau) return kNoNode;
    NodeId correct = shape_.is_treasure_ancestor(u) && depth_of(u) < shape_.treasure_depth
                         ? shape_.child(u, 0)
                         : shape_.parent(u);
    double qu = q_coef_;
    if (degree_scaled_) qu /= static_cast<double>(shape_.degree(u));
    NodeId adv_target = kNoNode;
    FaultMode mode = FaultMode::kRandom;
    if (adversary_ != VirtualAdversary::kNone) {
      mode = FaultMode::kSemiAdversarial;
      if (adversary_ == VirtualAdversary::kToRoot)
        adv_target = u == 0 ? shape_.child(u, 0) : shape_.parent(u);
      else
        adv_target =
            shape_.child_count(u) ? shape_.child(u, 0) : shape_.parent(u);
    }
    return draw_advice(
        rng::derive(seed_, rng::kAdviceTag, u), qu, mode, correct, adv_target,
        shape_.degree(u), [&](std::uint32_t i) { return neighbor(u, i); });
  }

  bool has_leaf_weights() const { return false; }
  double log_leaf_fraction(NodeId) const {
    fail(Errc::kUnsupported,
         "uniform-leaf weights need a materialized tree");
  }

  const CompleteShape& shape() const { return shape_; }

 private:
  CompleteShape shape_;
  std::uint64_t seed_;
  double q_coef_;
  bool degree_scaled_;
  VirtualAdversary adversary_;
};

}  // namespace nts
