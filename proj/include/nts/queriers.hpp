#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nts/domain.hpp"
#include "nts/walkers.hpp"

// Query-complexity algorithms on a known tree. The separator algorithms
// descend a fixed centroid decomposition; at each separator a local ball is
// searched until it either hits the treasure or certifies a component via a
// promising nominee. Every separator algorithm interleaves with a plain
// breadth-first scan, one scan query per algorithm query, so termination
// never depends on the local verdicts being right.

namespace nts {

enum class BallRule {
  kWeighted,  // ball radius by log_D beta_u(v) < h; nominees on the boundary
  kRegular,   // ball radius by distance; nominees at distance exactly h
};

// Re-rooted local ball T_h(u) within a component, original-tree degrees.
class BallDomain {
 public:
  enum class Kind : std::uint8_t { kInterior, kNominee, kTrueLeaf };

  template <class InComp>
  BallDomain(const Tree& t, AdviceView adv, NodeId center, std::uint32_t h,
             BallRule rule, double log_max_degree, InComp&& in_comp)
      : t_(&t), adv_(std::move(adv)), center_(center) {
    build(h, rule, log_max_degree, in_comp);
  }

  NodeId root() const { return center_; }
  NodeId treasure() const { return t_->treasure(); }
  NodeId parent_of(NodeId u) const { return node(u).parent; }
  std::uint32_t depth_of(NodeId u) const { return node(u).level; }
  std::uint32_t orig_degree(NodeId u) const { return t_->degree(u); }
  std::uint32_t neighbor_count(NodeId u) const { return t_->degree(u); }
  NodeId neighbor(NodeId u, std::uint32_t i) const { return t_->neighbor(u, i); }

  template <class F>
  void children_of(NodeId u, F&& f) const {
    for (NodeId c : node(u).children) f(c);
  }

  NodeId advice(NodeId u) const { return adv_(u); }
  bool has_leaf_weights() const { return false; }
  double log_leaf_fraction(NodeId) const {
    fail(Errc::kUnsupported, "ball domains carry no leaf prior");
  }

  Kind kind(NodeId u) const { return node(u).kind; }
  bool contains(NodeId u) const { return nodes_.contains(u); }
  std::uint64_t size() const { return nodes_.size(); }
  const std::vector<NodeId>& nominees() const { return nominees_; }

  // Sum of signed advice weights on [center, v): +w for advice toward v,
  // -w toward the center, 0 sideways. Regular rule uses unit weights.
  double arrow_sum(NodeId v, BallRule rule) const;

 private:
  struct Node {
    NodeId parent = kNoNode;
    std::uint32_t level = 0;
    Kind kind = Kind::kInterior;
    std::vector<NodeId> children;
  };
  const Node& node(NodeId u) const { return nodes_.at(u); }

  template <class InComp>
  void build(std::uint32_t h, BallRule rule, double log_max_degree,
             InComp&& in_comp);

  const Tree* t_;
  AdviceView adv_;
  NodeId center_;
  std::unordered_map<NodeId, Node> nodes_;
  std::vector<NodeId> nominees_;
};

template <class InComp>
void BallDomain::build(std::uint32_t h, BallRule rule, double log_max_degree,
                       InComp&& in_comp) {
  struct Item {
    NodeId id;
    NodeId parent;
    std::uint32_t level;
    double log_beta;  // re-rooted at the center
  };
  std::vector<Item> queue{{center_, kNoNode, 0, 0.0}};
  double weighted_limit = static_cast<double>(h) * log_max_degree;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    Item it = queue[qi];
    Node nd;
    nd.parent = it.parent;
    nd.level = it.level;
    bool interior = rule == BallRule::kWeighted ? it.log_beta < weighted_limit
                                                : it.level < h;
    std::uint32_t comp_children = 0;
    if (interior) {
      double lb =
          it.log_beta + std::log(static_cast<double>(t_->degree(it.id)));
      for (std::uint32_t i = 0; i < t_->degree(it.id); ++i) {
        NodeId nb = t_->neighbor(it.id, i);
        if (nb == it.parent || !in_comp(nb)) continue;
        nd.children.push_back(nb);
        queue.push_back({nb, it.id, it.level + 1, lb});
        ++comp_children;
      }
      nd.kind = comp_children ? Kind::kInterior : Kind::kTrueLeaf;
    } else {
      for (std::uint32_t i = 0; i < t_->degree(it.id); ++i) {
        NodeId nb = t_->neighbor(it.id, i);
        if (nb != it.parent && in_comp(nb)) ++comp_children;
      }
      nd.kind = comp_children ? Kind::kNominee : Kind::kTrueLeaf;
      if (nd.kind == Kind::kNominee) nominees_.push_back(it.id);
    }
    nodes_.emplace(it.id, std::move(nd));
  }
}

// Nominee test: true iff the signed arrow weight on [u,v) clears the 2/3
// threshold (h log D for the weighted rule, plain 2h/3 for the regular one,
// evaluated in integers).
bool promising(const Tree& t, const Advice& adv, NodeId u, NodeId v,
               std::uint32_t h, BallRule rule);
bool ball_promising(const BallDomain& ball, NodeId v, std::uint32_t h,
                    BallRule rule, double log_max_degree);

// Local procedure verdict.
struct LocalVerdict {
  enum class Kind { kTreasureFound, kComponent, kExhausted } kind;
  NodeId nominee = kNoNode;  // the promising nominee, for kComponent
  std::uint64_t queries = 0;
};

// Runs the walking engine on T_h(u) until it queries the treasure or a
// promising nominee (diagnostic entry point; the strands below do the same
// stepwise).
LocalVerdict local(const Tree& t, const AdviceView& adv, NodeId u,
                   std::uint32_t h, BallRule rule);

// Full-advice diagnostic: u is h-misleading if the ball around u either has
// the treasure outside with its gateway nominee not promising, or shows a
// promising nominee in a component of T \ {u} other than the gateway's.
bool is_misleading(const Tree& t, const Advice& adv, NodeId u,
                   std::uint32_t h, BallRule rule);

// Monte-Carlo estimate of P(root is h-misleading) on the complete tree of
// maximal degree delta and depth h+2, regular rule, scalar q. Runs on the
// arithmetic tree with a pruned scan, so large h stays cheap.
struct MisleadingEstimate {
  double p_hat = 0.0;
  double se = 0.0;
  std::uint64_t trials = 0;
};
MisleadingEstimate misleading_probability_regular_root(
    std::uint32_t delta, std::uint32_t h, double q, std::uint64_t trials,
    std::uint64_t seed, int threads = 0);

// --- Algorithms --------------------------------------------------------------

struct QueryResult {
  std::uint64_t queries = 0;  // total across strands
  bool found = false;
  bool separator_found = false;  // a separator strand hit the treasure
  std::uint64_t separator_queries = 0;
  std::uint64_t scan_queries = 0;
  std::uint32_t phases = 0;  // local procedures started
};

// Level-cycling search: query the reachable node with most seen arrows on
// the current level, then move to the next level.
Transcript a_loop(const Tree& t, const AdviceView& adv,
                  bool collect_order = false);
Transcript a_loop_on(const Tree& t, const AdviceView& adv,
                     const std::vector<NodeId>& domain,
                     bool collect_order = false);

// Separator descent with the weighted rule, h = ceil(-3 log(2n)/log(1-eps))
// unless overridden, interleaved 1:1 with a breadth-first scan.
QueryResult a_sep(const Tree& t, const AdviceView& adv, double eps,
                  const SeparatorTree* dec = nullptr,
                  std::uint32_t h_override = 0);

// Three interleaved strands on regular balls: a fast separator descent at
// h2 = ceil(kappa2 log log n), a separator descent running the level-cycling
// search at h1 = ceil(kappa1 log n), and the scan. kappa <= 0 picks the
// default ceil(3 / -log(1-eps)).
QueryResult a_two_layers(const Tree& t, const AdviceView& adv, double kappa1,
                         double kappa2, double eps,
                         const SeparatorTree* dec = nullptr);

std::uint32_t a_sep_radius(std::uint64_t n, double eps);
double default_kappa(double eps);

}  // namespace nts
