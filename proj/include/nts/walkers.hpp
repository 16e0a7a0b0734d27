#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "nts/domain.hpp"

namespace nts {

// One algorithm run: queries = nodes explored, moves = edge traversals.
struct Transcript {
  std::uint64_t queries = 0;
  std::uint64_t moves = 0;
  bool found = false;
  NodeId terminal = kNoNode;
  std::vector<NodeId> order;  // filled only when requested
};

enum class WalkWeight {
  kPathDegreeProduct,  // score(u) = (2/3) log 1/beta(u) - sum of away weights
  kUniformLeafPrior,   // beta replaced by the uniform-over-leaves prior
  kArrowCount,         // rank by plain count of seen arrows pointing at u
};

// Per-step trace sink: action is "query" or "move".
using StepSink =
    std::function<void(const char* action, NodeId node, std::uint64_t moves,
                       std::uint64_t queries)>;

// Frontier search over a domain. Keeps the set of candidates (children of
// explored nodes) and repeatedly walks to and explores the best one.
//
// Ranking uses the fact that the comparison between two candidates is fixed
// once the advice on their connecting path is known: with the explored set S
// connected, a candidate v with explored parent p ranks by the static key
//   key(v) = base(v) + r(p) + [adv(p) == v] * weight(p),
// where r(p) accumulates weights of explored nodes whose advice points toward
// p, minus a global offset shared by the whole frontier (advice pointing at a
// node's domain parent points toward every explored node at once, so that
// contribution is common and never materialized). Keys never change after
// insertion, so a plain max-heap with (key, lower id wins ties) reproduces
// the score argmax exactly.
//
// Heap keys are compared on a 2^-30 lattice: score differences are sums of
// logs of integer degrees, so genuinely distinct values sit far above that
// resolution while equal values computed along different summation orders
// land on the same lattice point and tie, keeping the lowest-id rule exact
// on symmetric trees.
inline double quantize_key(double x) {
  return std::nearbyint(x * 1073741824.0);  // 2^30
}
template <class Domain>
class FrontierWalker {
 public:
  FrontierWalker(const Domain& d, WalkWeight w, bool collect_order = false,
                 StepSink* sink = nullptr)
      : d_(&d), weight_(w), sink_(sink) {
    collect_ = collect_order;
    explored_.reserve(64);
    pos_ = d_->root();
    push_candidate(d_->root(), kNoNode, 0.0, 0.0);
  }

  // Explores one node; returns it, or kNoNode when the frontier is empty.
  NodeId step() {
    if (done_) return kNoNode;
    if (heap_.empty()) {
      done_ = true;
      return kNoNode;
    }
    Cand c = heap_.top();
    heap_.pop();

    // walk there: the candidate hangs one edge below its explored parent
    if (t_.queries > 0) {
      std::uint64_t dist = distance_explored(pos_, c.parent) + 1;
      t_.moves += dist;
      if (sink_) (*sink_)("move", c.id, t_.moves, t_.queries);
    }
    pos_ = c.id;
    explore(c);
    return c.id;
  }

  bool finished() const { return done_; }
  bool found() const { return t_.found; }
  const Transcript& transcript() const { return t_; }
  Transcript take_transcript() { return std::move(t_); }

  // Current (absolute) score of a candidate as the paper defines it; used by
  // tests to pin frozen values. Only valid for ids still in the frontier.
  double absolute_score(NodeId v, NodeId parent) const {
    const Explored& p = explored_.at(parent);
    double bonus = d_->advice(parent) == v ? node_weight(parent) : 0.0;
    return base_weight(v, parent) + (p.base_r + g_offset_) + bonus -
           total_weight_;
  }

 private:
  struct Cand {
    double qkey;      // lattice key, ranking only
    double key;       // raw key; seeds the explored node's toward-mass
    NodeId id;
    NodeId parent;
    double log_beta;  // domain-rooted, at the candidate
    bool operator<(const Cand& o) const {
      if (qkey != o.qkey) return qkey < o.qkey;  // max-heap on key
      return id > o.id;                          // then lowest id first
    }
  };
  struct Explored {
    double base_r;
    double log_beta;
    std::uint32_t depth;
    NodeId parent;
  };

  double node_weight(NodeId u) const {
    return weight_ == WalkWeight::kArrowCount
               ? 1.0
               : std::log(static_cast<double>(d_->orig_degree(u)));
  }

  double base_weight(NodeId v, NodeId parent) const {
    switch (weight_) {
      case WalkWeight::kPathDegreeProduct: {
        const Explored& p = explored_.at(parent);
        return -(2.0 / 3.0) * (p.log_beta + node_weight(parent));
      }
      case WalkWeight::kUniformLeafPrior:
        return (2.0 / 3.0) * d_->log_leaf_fraction(v);
      case WalkWeight::kArrowCount:
        return 0.0;
    }
    return 0.0;
  }

  void push_candidate(NodeId v, NodeId parent, double parent_base_r,
                      double bonus) {
    Cand c;
    c.id = v;
    c.parent = parent;
    if (parent == kNoNode) {
      c.key = 0.0;
      c.log_beta = 0.0;
    } else {
      const Explored& p = explored_.at(parent);
      c.log_beta = p.log_beta + node_weight(parent);
      c.key = base_weight(v, parent) + parent_base_r + bonus;
    }
    c.qkey = quantize_key(c.key);
    heap_.push(c);
  }

  void explore(const Cand& c) {
    ++t_.queries;
    if (collect_) t_.order.push_back(c.id);
    if (sink_) (*sink_)("query", c.id, t_.moves, t_.queries);

    Explored e;
    e.log_beta = c.log_beta;
    e.parent = c.parent;
    e.depth = c.parent == kNoNode ? 0 : explored_.at(c.parent).depth + 1;
    // key(v) = base(v) + base_r(parent) + bonus, all g-free; the node's own
    // toward-mass therefore starts at key - base.
    e.base_r =
        c.parent == kNoNode ? 0.0 : c.key - base_weight(c.id, c.parent);
    auto it = explored_.emplace(c.id, e).first;

    if (c.id == d_->treasure()) {
      t_.found = true;
      t_.terminal = c.id;
      done_ = true;
      return;
    }

    NodeId a = d_->advice(c.id);
    total_weight_ += node_weight(c.id);
    if (a != kNoNode && a == c.parent) {
      // Points at its domain parent: toward every explored node at once,
      // except itself and everything that will hang below it. The global
      // offset covers the former; subtracting from this node's own chained
      // mass cancels it for the node and its whole future subtree.
      g_offset_ += node_weight(c.id);
      it->second.base_r -= node_weight(c.id);
    }
    double my_base_r = it->second.base_r;
    d_->children_of(c.id, [&](NodeId ch) {
      double bonus = (a == ch) ? node_weight(c.id) : 0.0;
      push_candidate(ch, c.id, my_base_r, bonus);
    });
    t_.terminal = c.id;
  }

  std::uint64_t distance_explored(NodeId a, NodeId b) const {
    std::uint32_t da = explored_.at(a).depth;
    std::uint32_t db = explored_.at(b).depth;
    std::uint64_t dist = 0;
    while (da > db) {
      a = explored_.at(a).parent;
      --da;
      ++dist;
    }
    while (db > da) {
      b = explored_.at(b).parent;
      --db;
      ++dist;
    }
    while (a != b) {
      a = explored_.at(a).parent;
      b = explored_.at(b).parent;
      dist += 2;
    }
    return dist;
  }

  const Domain* d_;
  WalkWeight weight_;
  StepSink* sink_;
  bool collect_ = false;
  bool done_ = false;
  NodeId pos_;
  double g_offset_ = 0.0;
  double total_weight_ = 0.0;
  Transcript t_;
  std::priority_queue<Cand> heap_;
  std::unordered_map<NodeId, Explored> explored_;
};

// --- Entry points -----------------------------------------------------------

template <class Domain>
Transcript run_walker(const Domain& d, WalkWeight w, bool collect_order = false,
                      StepSink* sink = nullptr) {
  FrontierWalker<Domain> walker(d, w, collect_order, sink);
  while (!walker.finished()) walker.step();
  return walker.take_transcript();
}

// A_walk: frontier search ranked by (2/3) log(1/beta) minus seen advice
// pointing away. Discovers the tree on the fly.
Transcript a_walk(const Tree& t, const AdviceView& adv,
                  bool collect_order = false, StepSink* sink = nullptr);

// Greedy baseline: rank candidates by the raw number of seen arrows.
Transcript a_natural(const Tree& t, const AdviceView& adv,
                     bool collect_order = false, StepSink* sink = nullptr);

// A_walk with the uniform-over-leaves prior in place of 1/beta; reproduces
// the exponential failure on trimmed trees.
Transcript a_walk_uniform_theta(const Tree& t, const AdviceView& adv,
                                bool collect_order = false,
                                StepSink* sink = nullptr);

// True iff u's score strictly exceeds v's given the advice on the path
// between them (endpoints excluded). Agrees with the sign of
// score(u) - score(v) for any explored set that sees that path.
bool pairwise_beats(const Tree& t, const Advice& adv, NodeId u, NodeId v);

// Absolute score of candidate u for a given explored set; test/diagnostic.
double walker_score(const Tree& t, const Advice& adv,
                    const std::vector<NodeId>& explored, NodeId u,
                    WalkWeight w);

}  // namespace nts
