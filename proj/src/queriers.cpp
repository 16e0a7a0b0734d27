#include "nts/queriers.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "nts/parallel.hpp"

namespace nts {

namespace {

double path_arrow_sum(const Tree& t, const std::vector<NodeId>& path,
                      const std::function<NodeId(NodeId)>& advice_of,
                      bool weighted) {
  // path runs u -> v, endpoints included; advice weights on [u,v)
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    NodeId w = path[i];
    NodeId a = advice_of(w);
    require(a != kNoNode, Errc::kInvalidArgument,
            "advice missing on the nominee path");
    double wt = weighted ? std::log(static_cast<double>(t.degree(w))) : 1.0;
    if (a == path[i + 1])
      sum += wt;  // toward v
    else if (i > 0 && a == path[i - 1])
      sum -= wt;  // toward u
  }
  return sum;
}

bool clears_threshold(double sum, std::uint32_t h, BallRule rule,
                      double log_max_degree) {
  if (rule == BallRule::kWeighted)
    return sum >= (2.0 / 3.0) * static_cast<double>(h) * log_max_degree;
  // regular rule: integral weights, exact comparison
  long long s = std::llround(sum);
  return 3 * s >= 2 * static_cast<long long>(h);
}

}  // namespace

double BallDomain::arrow_sum(NodeId v, BallRule rule) const {
  double sum = 0.0;
  NodeId cur = v;
  NodeId below = kNoNode;
  // climb v -> center; each visited node w != v contributes X_w
  while (true) {
    NodeId par = node(cur).parent;
    if (below != kNoNode) {  // cur is on [u,v)
      NodeId a = adv_(cur);
      require(a != kNoNode, Errc::kInvalidArgument,
              "advice missing on the nominee path");
      double wt = rule == BallRule::kWeighted
                      ? std::log(static_cast<double>(t_->degree(cur)))
                      : 1.0;
      if (a == below)
        sum += wt;
      else if (par != kNoNode && a == par)
        sum -= wt;
    }
    if (cur == center_) break;
    below = cur;
    cur = par;
  }
  return sum;
}

bool ball_promising(const BallDomain& ball, NodeId v, std::uint32_t h,
                    BallRule rule, double log_max_degree) {
  return clears_threshold(ball.arrow_sum(v, rule), h, rule, log_max_degree);
}

bool promising(const Tree& t, const Advice& adv, NodeId u, NodeId v,
               std::uint32_t h, BallRule rule) {
  auto path = t.path(u, v);
  double sum = path_arrow_sum(
      t, path, [&](NodeId w) { return adv.pointer[w]; },
      rule == BallRule::kWeighted);
  return clears_threshold(
      sum, h, rule, std::log(static_cast<double>(max_degree(t))));
}

// --- Level-cycling search (A_loop) -------------------------------------------

namespace {

// Static per-candidate keys: within one level the ranking by seen arrows is
// fixed once the candidate exists (shared contributions cancel), so each
// level is a plain max-heap.
template <class Domain>
class LevelCycleRunner {
 public:
  explicit LevelCycleRunner(const Domain& d) : d_(&d) {}

  std::optional<NodeId> step() {
    if (done_) return std::nullopt;
    if (!root_done_) {
      root_done_ = true;
      query(d_->root(), kNoNode, 0.0);
      return d_->root();
    }
    if (pending_ == 0) {
      done_ = true;
      return std::nullopt;
    }
    // continue the level cycle from where the last round left off; empty
    // levels cost nothing
    std::size_t levels = heaps_.size();
    for (std::size_t scanned = 0;; ++scanned) {
      if (ptr_ >= levels) ptr_ = 0;
      if (!heaps_[ptr_].empty()) break;
      ++ptr_;
      if (scanned > levels) {
        done_ = true;  // unreachable while pending_ > 0
        return std::nullopt;
      }
    }
    Cand c = heaps_[ptr_].top();
    heaps_[ptr_].pop();
    --pending_;
    ++ptr_;
    query(c.id, c.parent, c.key);
    return c.id;
  }

  bool found() const { return found_; }
  bool exhausted() const { return done_ && !found_; }
  std::uint64_t queries() const { return queries_; }

 private:
  struct Cand {
    double key;
    NodeId id;
    NodeId parent;
    bool operator<(const Cand& o) const {
      if (key != o.key) return key < o.key;
      return id > o.id;
    }
  };

  void query(NodeId u, NodeId parent, double key) {
    ++queries_;
    if (u == d_->treasure()) {
      found_ = true;
      done_ = true;
      return;
    }
    NodeId a = d_->advice(u);
    // g-free toward-mass: an arrow at u toward its domain parent points
    // toward every queried node at once (a shared offset that cancels in
    // comparisons) except u itself and its future subtree, which the chain
    // below must compensate for.
    double base_r = key;
    if (a != kNoNode && parent != kNoNode && a == parent) base_r -= 1.0;
    std::uint32_t lvl = d_->depth_of(u) + 1;
    if (heaps_.size() < lvl + 1) heaps_.resize(lvl + 1);
    d_->children_of(u, [&](NodeId ch) {
      double bonus = (a == ch) ? 1.0 : 0.0;
      heaps_[lvl].push({base_r + bonus, ch, u});
      ++pending_;
    });
  }

  const Domain* d_;
  std::vector<std::priority_queue<Cand>> heaps_;
  std::size_t ptr_ = 1;
  std::uint64_t pending_ = 0;
  std::uint64_t queries_ = 0;
  bool root_done_ = false;
  bool found_ = false;
  bool done_ = false;
};

// Connected node set as a walker/looper domain.
class SubtreeDomain {
 public:
  SubtreeDomain(const Tree& t, AdviceView adv, const std::vector<NodeId>& set)
      : t_(&t), adv_(std::move(adv)), members_(set.begin(), set.end()) {
    for (NodeId u : set) {
      NodeId p = t.parent(u);
      if (p == kNoNode || !members_.contains(p)) {
        require(root_ == kNoNode, Errc::kInvalidArgument,
                "domain must be a connected subtree");
        root_ = u;
      }
    }
    require(root_ != kNoNode, Errc::kInvalidArgument, "domain is empty");
  }

  NodeId root() const { return root_; }
  NodeId treasure() const { return t_->treasure(); }
  NodeId parent_of(NodeId u) const {
    NodeId p = t_->parent(u);
    return u == root_ ? kNoNode : p;
  }
  std::uint32_t depth_of(NodeId u) const {
    return t_->depth_of(u) - t_->depth_of(root_);
  }
  std::uint32_t orig_degree(NodeId u) const { return t_->degree(u); }
  template <class F>
  void children_of(NodeId u, F&& f) const {
    for (NodeId c : t_->children(u))
      if (members_.contains(c)) f(c);
  }
  NodeId advice(NodeId u) const { return adv_(u); }
  bool has_leaf_weights() const { return false; }
  double log_leaf_fraction(NodeId) const {
    fail(Errc::kUnsupported, "subtree domains carry no leaf prior");
  }

 private:
  const Tree* t_;
  AdviceView adv_;
  std::unordered_set<NodeId> members_;
  NodeId root_ = kNoNode;
};

}  // namespace

Transcript a_loop(const Tree& t, const AdviceView& adv, bool collect_order) {
  FullDomain d(t, adv);
  LevelCycleRunner<FullDomain> run(d);
  Transcript out;
  while (auto q = run.step()) {
    out.terminal = *q;
    if (collect_order) out.order.push_back(*q);
  }
  out.queries = run.queries();
  out.found = run.found();
  return out;
}

Transcript a_loop_on(const Tree& t, const AdviceView& adv,
                     const std::vector<NodeId>& domain, bool collect_order) {
  SubtreeDomain d(t, adv, domain);
  LevelCycleRunner<SubtreeDomain> run(d);
  Transcript out;
  while (auto q = run.step()) {
    out.terminal = *q;
    if (collect_order) out.order.push_back(*q);
  }
  out.queries = run.queries();
  out.found = run.found();
  return out;
}

// --- Local procedure ----------------------------------------------------------

namespace {

struct LocalRun {
  LocalRun(const Tree& t, AdviceView adv, NodeId center, std::uint32_t h,
           BallRule rule, double log_max_deg, const SeparatorTree::Node* comp,
           bool use_loop)
      : h_(h), rule_(rule), log_max_deg_(log_max_deg) {
    auto in_comp = [comp](NodeId v) {
      return comp == nullptr || SeparatorTree::contains(*comp, v);
    };
    ball_ = std::make_unique<BallDomain>(t, std::move(adv), center, h, rule,
                                         log_max_deg, in_comp);
    if (use_loop)
      loop_ = std::make_unique<LevelCycleRunner<BallDomain>>(*ball_);
    else
      walk_ = std::make_unique<FrontierWalker<BallDomain>>(
          *ball_, WalkWeight::kPathDegreeProduct);
  }

  // One query; returns the node, or nullopt when the ball is exhausted.
  std::optional<NodeId> step() {
    NodeId v = kNoNode;
    if (walk_) {
      v = walk_->step();
      if (v == kNoNode) return std::nullopt;
    } else {
      auto q = loop_->step();
      if (!q) return std::nullopt;
      v = *q;
    }
    return v;
  }

  bool treasure_hit(NodeId v, const Tree& t) const {
    return v == t.treasure();
  }
  bool promising_nominee(NodeId v) const {
    return ball_->kind(v) == BallDomain::Kind::kNominee &&
           ball_promising(*ball_, v, h_, rule_, log_max_deg_);
  }

  std::uint32_t h_;
  BallRule rule_;
  double log_max_deg_;
  std::unique_ptr<BallDomain> ball_;
  std::unique_ptr<FrontierWalker<BallDomain>> walk_;
  std::unique_ptr<LevelCycleRunner<BallDomain>> loop_;
};

}  // namespace

LocalVerdict local(const Tree& t, const AdviceView& adv, NodeId u,
                   std::uint32_t h, BallRule rule) {
  double lmd = std::log(static_cast<double>(max_degree(t)));
  LocalRun run(t, adv, u, h, rule, lmd, nullptr, false);
  LocalVerdict v;
  v.kind = LocalVerdict::Kind::kExhausted;
  while (auto q = run.step()) {
    ++v.queries;
    if (run.treasure_hit(*q, t)) {
      v.kind = LocalVerdict::Kind::kTreasureFound;
      return v;
    }
    if (run.promising_nominee(*q)) {
      v.kind = LocalVerdict::Kind::kComponent;
      v.nominee = *q;
      return v;
    }
  }
  return v;
}

// --- Interleaved strands --------------------------------------------------------

namespace {

class Strand {
 public:
  virtual ~Strand() = default;
  virtual std::optional<NodeId> next() = 0;
};

class ExhaustiveStrand : public Strand {
 public:
  explicit ExhaustiveStrand(const Tree& t) : order_(bfs_order(t)) {}
  std::optional<NodeId> next() override {
    if (i_ >= order_.size()) return std::nullopt;
    return order_[i_++];
  }

 private:
  std::vector<NodeId> order_;
  std::size_t i_ = 0;
};

class SeparatorStrand : public Strand {
 public:
  SeparatorStrand(const Tree& t, AdviceView adv, const SeparatorTree& dec,
                  BallRule rule, bool use_loop, std::uint32_t h)
      : t_(&t),
        adv_(std::move(adv)),
        dec_(&dec),
        rule_(rule),
        use_loop_(use_loop),
        h_(h),
        log_max_deg_(std::log(static_cast<double>(max_degree(t)))),
        cur_(dec.root) {}

  std::optional<NodeId> next() override {
    if (stalled_) return std::nullopt;
    if (!run_) start_phase();
    auto q = run_->step();
    if (!q) {  // ball exhausted without a verdict: fall back to the scan
      stalled_ = true;
      return std::nullopt;
    }
    NodeId v = *q;
    if (v == t_->treasure()) return v;  // caller stops the whole search
    if (run_->promising_nominee(v)) descend(v);
    return v;
  }

  std::uint32_t phases() const { return phases_; }

 private:
  void start_phase() {
    const auto& nd = dec_->nodes[cur_];
    ++phases_;
    run_ = std::make_unique<LocalRun>(*t_, adv_, nd.separator, h_, rule_,
                                      log_max_deg_, &nd, use_loop_);
  }

  void descend(NodeId nominee) {
    run_.reset();
    for (int child : dec_->nodes[cur_].children) {
      if (SeparatorTree::contains(dec_->nodes[child], nominee)) {
        cur_ = child;
        return;
      }
    }
    stalled_ = true;  // nominee outside every sub-component
  }

  const Tree* t_;
  AdviceView adv_;
  const SeparatorTree* dec_;
  BallRule rule_;
  bool use_loop_;
  std::uint32_t h_;
  double log_max_deg_;
  int cur_;
  std::uint32_t phases_ = 0;
  bool stalled_ = false;
  std::unique_ptr<LocalRun> run_;
};

// Round-robin over the strands; the scan strand is last so it never races
// ahead of the separator work it backs up.
QueryResult run_interleaved(const Tree& t,
                            std::vector<Strand*> const& strands,
                            std::size_t scan_index) {
  QueryResult out;
  std::vector<std::uint64_t> counts(strands.size(), 0);
  NodeId tau = t.treasure();
  bool done = false;
  for (;;) {
    bool any = false;
    for (std::size_t i = 0; i < strands.size() && !done; ++i) {
      auto q = strands[i]->next();
      if (!q) continue;
      any = true;
      ++out.queries;
      ++counts[i];
      if (*q == tau) {
        out.found = true;
        out.separator_found = i != scan_index;
        done = true;
      }
    }
    if (done || !any) break;
  }
  out.scan_queries = counts[scan_index];
  for (std::size_t i = 0; i < strands.size(); ++i)
    if (i != scan_index) out.separator_queries += counts[i];
  return out;
}

}  // namespace

std::uint32_t a_sep_radius(std::uint64_t n, double eps) {
  require(eps > 0.0 && eps < 1.0, Errc::kInvalidArgument,
          "eps must be in (0,1)");
  double h = -3.0 * std::log(2.0 * static_cast<double>(n)) /
             std::log(1.0 - eps);
  return static_cast<std::uint32_t>(std::ceil(h));
}

double default_kappa(double eps) {
  return std::ceil(3.0 / -std::log1p(-eps));
}

QueryResult a_sep(const Tree& t, const AdviceView& adv, double eps,
                  const SeparatorTree* dec, std::uint32_t h_override) {
  SeparatorTree local_dec;
  if (!dec) {
    local_dec = centroid_decomposition(t);
    dec = &local_dec;
  }
  std::uint32_t h = h_override ? h_override : a_sep_radius(t.size(), eps);
  SeparatorStrand sep(t, adv, *dec, BallRule::kWeighted, false, h);
  ExhaustiveStrand scan(t);
  std::vector<Strand*> strands{&sep, &scan};
  QueryResult out = run_interleaved(t, strands, 1);
  out.phases = sep.phases();
  return out;
}

QueryResult a_two_layers(const Tree& t, const AdviceView& adv, double kappa1,
                         double kappa2, double eps, const SeparatorTree* dec) {
  SeparatorTree local_dec;
  if (!dec) {
    local_dec = centroid_decomposition(t);
    dec = &local_dec;
  }
  double n = static_cast<double>(t.size());
  if (kappa1 <= 0) kappa1 = default_kappa(eps);
  if (kappa2 <= 0) kappa2 = default_kappa(eps);
  std::uint32_t h1 = static_cast<std::uint32_t>(
      std::max(1.0, std::ceil(kappa1 * std::log(n))));
  std::uint32_t h2 = static_cast<std::uint32_t>(std::max(
      1.0, std::ceil(kappa2 * std::log(std::max(std::log(n), 1.001)))));
  SeparatorStrand fast(t, adv, *dec, BallRule::kRegular, false, h2);
  SeparatorStrand mid(t, adv, *dec, BallRule::kRegular, true, h1);
  ExhaustiveStrand scan(t);
  std::vector<Strand*> strands{&fast, &mid, &scan};
  QueryResult out = run_interleaved(t, strands, 2);
  out.phases = fast.phases() + mid.phases();
  return out;
}

// --- Misleading diagnostics ------------------------------------------------------

bool is_misleading(const Tree& t, const Advice& adv, NodeId u,
                   std::uint32_t h, BallRule rule) {
  if (u == t.treasure()) return false;
  double lmd = std::log(static_cast<double>(max_degree(t)));
  AdviceView view = AdviceView::stored(t, adv);
  BallDomain ball(t, view, u, h, rule, lmd, [](NodeId) { return true; });

  NodeId tau = t.treasure();
  NodeId gateway;  // the ball leaf closest to the treasure
  bool tau_inside = ball.contains(tau) &&
                    (ball.kind(tau) != BallDomain::Kind::kNominee);
  if (ball.contains(tau)) {
    gateway = tau;
  } else {
    // walk the u->tau path until it exits the ball
    gateway = u;
    for (NodeId x : t.path(u, tau)) {
      if (!ball.contains(x)) break;
      gateway = x;
    }
  }
  (void)tau_inside;

  if (gateway != tau &&
      !ball_promising(ball, gateway, h, rule, lmd))
    return true;  // treasure outside, gateway nominee not promising

  NodeId gateway_side = gateway == u ? kNoNode : t.next_hop(u, gateway);
  for (NodeId v : ball.nominees()) {
    if (t.next_hop(u, v) == gateway_side) continue;
    if (ball_promising(ball, v, h, rule, lmd)) return true;
  }
  return false;
}

MisleadingEstimate misleading_probability_regular_root(
    std::uint32_t delta, std::uint32_t h, double q, std::uint64_t trials,
    std::uint64_t seed, int threads) {
  require(delta >= 3 && h >= 1, Errc::kInvalidArgument,
          "need delta >= 3 and h >= 1");
  CompleteShape shape = CompleteShape::make(delta, delta - 1, h + 2, h + 2);
  const long long need3 = 2 * static_cast<long long>(h);  // 3*sum >= 2h

  std::vector<std::uint8_t> hits(trials, 0);
  parallel_for(trials, threads, [&](std::uint64_t i) {
    std::uint64_t ts = rng::derive(seed, rng::kTrialTag, i);
    VirtualCompleteDomain dom(shape, ts, q, false, VirtualAdversary::kNone);

    // gateway path: the all-leftmost chain at depths 0..h-1
    long long sum = 0;
    for (std::uint32_t d = 0; d < h; ++d) {
      NodeId w = shape.level_off[d];
      NodeId a = dom.advice(w);
      if (a == shape.child(w, 0))
        ++sum;
      else if (d > 0 && a == shape.parent(w))
        --sum;
    }
    bool misleading = 3 * sum < need3;

    if (!misleading) {
      // pruned scan of the other root components for a promising nominee
      struct Frame {
        NodeId id;
        std::uint32_t depth;
        long long sum;
      };
      std::vector<Frame> stack;
      NodeId root_adv = dom.advice(0);
      for (std::uint32_t j = 1; j < shape.root_children; ++j) {
        NodeId c = shape.child(0, j);
        long long s = root_adv == c ? 1 : 0;
        if (3 * (s + static_cast<long long>(h - 1)) >= need3)
          stack.push_back({c, 1, s});
      }
      while (!stack.empty() && !misleading) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.depth == h) {
          if (3 * f.sum >= need3) misleading = true;
          continue;
        }
        NodeId a = dom.advice(f.id);
        bool points_up = a == shape.parent(f.id);
        std::uint32_t cc = shape.child_count(f.id);
        for (std::uint32_t j = 0; j < cc; ++j) {
          NodeId c = shape.child(f.id, j);
          long long s = f.sum + (points_up ? -1 : (a == c ? 1 : 0));
          long long room = static_cast<long long>(h - f.depth - 1);
          if (3 * (s + room) >= need3) stack.push_back({c, f.depth + 1, s});
        }
      }
    }
    hits[i] = misleading ? 1 : 0;
  });

  std::uint64_t count = 0;
  for (auto v : hits) count += v;
  MisleadingEstimate est;
  est.trials = trials;
  est.p_hat = static_cast<double>(count) / static_cast<double>(trials);
  est.se = std::sqrt(est.p_hat * (1.0 - est.p_hat) /
                     static_cast<double>(trials));
  return est;
}

}  // namespace nts
