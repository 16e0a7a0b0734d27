#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "nts/memoryless.hpp"
#include "nts/walkers.hpp"
#include "test_support.hpp"

using namespace nts;

namespace {

Advice random_advice(const Tree& t, double q, std::uint64_t seed) {
  return sample_advice(t, NoiseModel::uniform(t, q), seed);
}

// Reference implementation: rebuild the candidate set and recompute every
// score from scratch at each step, then explore the argmax on the same
// comparison lattice the engine uses (ties by lowest id).
std::vector<NodeId> brute_force_order(const Tree& t, const Advice& adv,
                                      WalkWeight w) {
  std::vector<NodeId> explored{t.root()};
  std::set<NodeId> explored_set{t.root()};
  while (explored.back() != t.treasure()) {
    NodeId best = kNoNode;
    double best_score = 0.0;
    for (NodeId e : explored_set) {
      for (NodeId c : t.children(e)) {
        if (explored_set.contains(c)) continue;
        double s = quantize_key(walker_score(t, adv, explored, c, w));
        if (best == kNoNode || s > best_score ||
            (s == best_score && c < best)) {
          best = c;
          best_score = s;
        }
      }
    }
    REQUIRE(best != kNoNode);
    explored.push_back(best);
    explored_set.insert(best);
  }
  return explored;
}

// Domain wrapper asserting the on-line discipline: advice and degrees are
// read only at explored nodes, candidates only appear via explored parents.
class InstrumentedDomain {
 public:
  explicit InstrumentedDomain(const Tree& t, const Advice& a)
      : inner_(t, AdviceView::stored(t, a)) {}

  NodeId root() const { return inner_.root(); }
  NodeId treasure() const { return inner_.treasure(); }
  NodeId parent_of(NodeId u) const { return inner_.parent_of(u); }
  std::uint32_t depth_of(NodeId u) const { return inner_.depth_of(u); }
  std::uint32_t orig_degree(NodeId u) const {
    CHECK(seen_.contains(u));
    return inner_.orig_degree(u);
  }
  template <class F>
  void children_of(NodeId u, F&& f) const {
    CHECK(seen_.contains(u));
    inner_.children_of(u, std::forward<F>(f));
  }
  NodeId advice(NodeId u) const {
    CHECK_FALSE(seen_.contains(u));
    CHECK((u == root() || seen_.contains(parent_of(u))));
    seen_.insert(u);
    return inner_.advice(u);
  }
  bool has_leaf_weights() const { return false; }
  double log_leaf_fraction(NodeId) const { return 0.0; }

 private:
  FullDomain inner_;
  mutable std::set<NodeId> seen_;
};

}  // namespace

TEST_CASE("noiseless exactness on complete trees") {
  for (std::uint32_t b : {2u, 3u, 4u}) {
    for (std::uint32_t d = 1; d <= 6; ++d) {
      Tree t = make_complete({.branching = b, .depth = d,
                              .treasure_depth = d});
      Advice adv = random_advice(t, 0.0, 1);
      Transcript tr = a_walk(t, AdviceView::stored(t, adv));
      CHECK(tr.found);
      CHECK(tr.moves == d);
      CHECK(tr.queries == d + 1);
    }
  }
}

TEST_CASE("single-node tree: one query, no moves") {
  Tree t = make_from_spec("path:1");
  Advice adv = random_advice(t, 0.5, 2);
  for (auto w : {WalkWeight::kPathDegreeProduct, WalkWeight::kArrowCount,
                 WalkWeight::kUniformLeafPrior}) {
    FullDomain d(t, AdviceView::stored(t, adv));
    Transcript tr = run_walker(d, w);
    CHECK(tr.queries == 1);
    CHECK(tr.moves == 0);
    CHECK(tr.found);
  }
}

TEST_CASE("frozen score example on the complete binary tree") {
  // explore the root and its first child with all-correct advice; the deep
  // candidate scores (2/3)ln(1/6), the unexplored sibling pays both arrows
  Tree t = make_complete({.branching = 2, .depth = 2, .treasure_depth = 2});
  Advice adv = random_advice(t, 0.0, 3);
  NodeId u1 = t.children(t.root())[0];
  NodeId u2 = t.children(t.root())[1];
  NodeId w1 = t.children(u1)[0];
  std::vector<NodeId> explored{t.root(), u1};
  double deep = walker_score(t, adv, explored, w1,
                             WalkWeight::kPathDegreeProduct);
  double sibling = walker_score(t, adv, explored, u2,
                                WalkWeight::kPathDegreeProduct);
  CHECK(deep == doctest::Approx((2.0 / 3.0) * std::log(1.0 / 6.0)));
  CHECK(deep == doctest::Approx(-1.1945).epsilon(1e-3));
  CHECK(sibling ==
        doctest::Approx((2.0 / 3.0) * std::log(0.5) - std::log(2.0) -
                        std::log(3.0)));
  CHECK(sibling == doctest::Approx(-2.2543).epsilon(1e-3));
  CHECK(deep > sibling);
  // same comparison through the pairwise criterion
  CHECK(pairwise_beats(t, adv, w1, u2));
  CHECK_FALSE(pairwise_beats(t, adv, u2, w1));
  // and the explicit threshold arithmetic of that comparison
  double lhs = std::log(3.0) + std::log(2.0);
  double rhs = (2.0 / 3.0) * std::log(6.0 / 2.0);
  CHECK(lhs == doctest::Approx(1.792).epsilon(1e-3));
  CHECK(rhs == doctest::Approx(0.732).epsilon(1e-3));
  CHECK(lhs > rhs);
}

TEST_CASE("pairwise comparison edge cases") {
  // one correct arrow at the shared parent, equal beta: the target wins
  Tree t = make_complete({.branching = 2, .depth = 1, .treasure_depth = 1});
  Advice adv = random_advice(t, 0.0, 4);
  NodeId tau = t.treasure();
  NodeId sib = t.children(t.root())[1] == tau ? t.children(t.root())[0]
                                              : t.children(t.root())[1];
  CHECK(pairwise_beats(t, adv, tau, sib));
  CHECK_FALSE(pairwise_beats(t, adv, sib, tau));

  // all-sideways advice on the path, equal beta: strict inequality fails
  Tree s = make_from_spec("star:3,1");
  Advice a2;
  a2.pointer.assign(s.size(), kNoNode);
  a2.faulty.assign(s.size(), 1);
  a2.pointer[0] = 3;  // the center points at the third leaf
  a2.pointer[2] = 0;
  a2.pointer[3] = 0;
  CHECK_FALSE(pairwise_beats(s, a2, 2, 3));  // 0 > 0 is false for both
  CHECK(pairwise_beats(s, a2, 3, 2));        // the pointed leaf does win
}

TEST_CASE("engine explores exactly the brute-force score order") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Tree t = test::random_tree(3 + (seed % 8) * 5, 100 + seed);
    Advice adv = random_advice(t, 0.15 + 0.2 * (seed % 4), 200 + seed);
    for (auto w : {WalkWeight::kPathDegreeProduct, WalkWeight::kArrowCount,
                   WalkWeight::kUniformLeafPrior}) {
      FullDomain d(t, AdviceView::stored(t, adv));
      FrontierWalker<FullDomain> walker(d, w, true);
      while (!walker.finished()) walker.step();
      auto expect = brute_force_order(t, adv, w);
      CHECK(walker.transcript().order == expect);
    }
  }
}

TEST_CASE("argmax agrees with a pairwise-comparison tournament") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Tree t = test::random_tree(20, 300 + seed);
    Advice adv = random_advice(t, 0.3, 400 + seed);
    FullDomain d(t, AdviceView::stored(t, adv));
    FrontierWalker<FullDomain> walker(d, WalkWeight::kPathDegreeProduct,
                                      true);
    std::set<NodeId> explored;
    while (!walker.finished()) {
      // collect the candidate set before the step
      std::vector<NodeId> cands;
      for (NodeId e : explored)
        for (NodeId c : t.children(e))
          if (!explored.contains(c)) cands.push_back(c);
      NodeId got = walker.step();
      if (got == kNoNode) break;
      if (!cands.empty()) {
        // tournament winner under pairwise_beats with id tie-break
        NodeId win = cands.front();
        for (NodeId c : cands) {
          if (c == win) continue;
          if (pairwise_beats(t, adv, c, win) ||
              (!pairwise_beats(t, adv, win, c) && c < win))
            win = c;
        }
        CHECK(got == win);
      }
      explored.insert(got);
    }
  }
}

TEST_CASE("score locality: only newly revealed away-advice moves a score") {
  Tree t = test::random_tree(18, 9);
  Advice adv = random_advice(t, 0.4, 10);
  // grow the explored set along the breadth-first order and watch one fixed
  // candidate's score
  auto order = bfs_order(t);
  std::vector<NodeId> explored{order[0]};
  NodeId cand = order.back();
  double prev = walker_score(t, adv, explored, cand,
                             WalkWeight::kPathDegreeProduct);
  for (std::size_t i = 1; i + 1 < order.size(); ++i) {
    NodeId w = order[i];
    if (w == cand) break;
    explored.push_back(w);
    double cur = walker_score(t, adv, explored, cand,
                              WalkWeight::kPathDegreeProduct);
    bool away = adv.pointer[w] != kNoNode &&
                adv.pointer[w] != t.next_hop(w, cand);
    if (away)
      CHECK(cur == doctest::Approx(prev - std::log(double(t.degree(w)))));
    else
      CHECK(cur == doctest::Approx(prev));
    prev = cur;
  }
}

TEST_CASE("monotone termination and move accounting") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Tree t = test::random_tree(30, 500 + seed);
    Advice adv = random_advice(t, 0.5, 600 + seed);
    FullDomain d(t, AdviceView::stored(t, adv));
    Transcript tr = run_walker(d, WalkWeight::kPathDegreeProduct, true);
    CHECK(tr.found);
    CHECK(tr.terminal == t.treasure());
    CHECK(tr.queries == tr.order.size());
    CHECK(tr.queries <= t.size());
    CHECK(tr.moves >= t.treasure_depth());
    std::set<NodeId> uniq(tr.order.begin(), tr.order.end());
    CHECK(uniq.size() == tr.order.size());  // one query per explored node
    std::uint64_t dist_sum = 0;
    for (std::size_t i = 0; i + 1 < tr.order.size(); ++i)
      dist_sum += t.distance(tr.order[i], tr.order[i + 1]);
    CHECK(tr.moves == dist_sum);
  }
}

TEST_CASE("walkers never read advice or degrees off the explored set") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Tree t = test::random_tree(40, 700 + seed);
    Advice adv = random_advice(t, 0.5, 800 + seed);
    InstrumentedDomain d(t, adv);
    for (auto w : {WalkWeight::kPathDegreeProduct, WalkWeight::kArrowCount}) {
      InstrumentedDomain fresh(t, adv);
      Transcript tr = run_walker(fresh, w);
      CHECK(tr.found);
    }
    (void)d;
  }
}

TEST_CASE("arrow-count baseline: path, star and tie-breaking") {
  Tree path = make_from_spec("path:5");
  Advice adv = random_advice(path, 0.0, 1);
  Transcript tr = a_natural(path, AdviceView::stored(path, adv));
  CHECK(tr.moves == 4);  // only one candidate per step
  CHECK(tr.queries == 5);

  Tree star = make_from_spec("star:6,3");
  Advice sadv = random_advice(star, 0.0, 1);
  Transcript st = a_natural(star, AdviceView::stored(star, sadv));
  CHECK(st.queries == 2);  // center then the pointed leaf

  // two zero-arrow candidates: the lower id is explored first
  Advice blank;
  blank.pointer.assign(star.size(), kNoNode);
  blank.faulty.assign(star.size(), 1);
  blank.pointer[0] = 5;  // center points at a non-treasure leaf
  for (NodeId leaf = 1; leaf < star.size(); ++leaf) blank.pointer[leaf] = 0;
  blank.pointer[star.treasure()] = kNoNode;
  Transcript bt = a_natural(star, AdviceView::stored(star, blank), true);
  CHECK(bt.order[1] == 5);  // the arrowed leaf first
  CHECK(bt.order[2] == 1);  // then plain id order among ties
}

TEST_CASE("uniform-prior variant ranks equal-depth candidates like a_walk") {
  Tree t = make_complete({.branching = 3, .depth = 3, .treasure_depth = 3});
  Advice adv = random_advice(t, 0.5, 12);
  std::vector<NodeId> explored;
  for (NodeId u : bfs_order(t)) {
    if (t.depth_of(u) <= 1) explored.push_back(u);
  }
  // compare all same-depth pairs of unexplored depth-2 nodes
  std::vector<NodeId> cands;
  for (NodeId u = 0; u < t.size(); ++u)
    if (t.depth_of(u) == 2) cands.push_back(u);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (std::size_t j = i + 1; j < cands.size(); ++j) {
      double a1 = walker_score(t, adv, explored, cands[i],
                               WalkWeight::kPathDegreeProduct);
      double a2 = walker_score(t, adv, explored, cands[j],
                               WalkWeight::kPathDegreeProduct);
      double b1 = walker_score(t, adv, explored, cands[i],
                               WalkWeight::kUniformLeafPrior);
      double b2 = walker_score(t, adv, explored, cands[j],
                               WalkWeight::kUniformLeafPrior);
      CHECK((a1 - a2) == doctest::Approx(b1 - b2));
    }
  }
}

TEST_CASE("virtual and materialized complete trees give identical trials") {
  CompleteShape shape = CompleteShape::make(4, 3, 5, 5);
  Tree t = make_complete({.branching = 3, .depth = 5, .treasure_depth = 5,
                          .root_children = 4});
  REQUIRE(t.size() == shape.size);
  NoiseModel m = NoiseModel::uniform(t, 0.2);
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    std::uint64_t ts = rng::derive(17, rng::kTrialTag, trial);
    VirtualCompleteDomain vd(shape, ts, 0.2, false, VirtualAdversary::kNone);
    FullDomain fd(t, AdviceView::hashed(t, m, ts));
    for (auto w : {WalkWeight::kPathDegreeProduct, WalkWeight::kArrowCount}) {
      Transcript a = run_walker(vd, w, true);
      Transcript b = run_walker(fd, w, true);
      CHECK(a.order == b.order);
      CHECK(a.moves == b.moves);
    }
    PfOutcome pa = probabilistic_following(vd, {0.7, 1u << 20}, ts);
    PfOutcome pb = probabilistic_following(fd, {0.7, 1u << 20}, ts);
    CHECK(pa.steps == pb.steps);
  }
}

TEST_CASE("virtual topology matches the materialized one node by node") {
  CompleteShape shape = CompleteShape::make_filled(5, 137);
  Tree t = make_complete_filled(5, 137);
  REQUIRE(shape.size == t.size());
  CHECK(shape.treasure() == t.treasure());
  for (NodeId u = 0; u < t.size(); ++u) {
    CHECK(shape.parent(u) == (u == t.root() ? kNoNode : t.parent(u)));
    CHECK(shape.degree(u) == t.degree(u));
    CHECK(shape.depth_of(u) == t.depth_of(u));
    CHECK(shape.child_count(u) == t.child_count(u));
  }
}

TEST_CASE("semi-adversarial trials agree between the two tree routes") {
  CompleteShape shape = CompleteShape::make(4, 3, 4, 4);
  Tree t = make_complete({.branching = 3, .depth = 4, .treasure_depth = 4,
                          .root_children = 4});
  for (int which = 0; which < 2; ++which) {
    NoiseModel m = NoiseModel::semi_adversarial(
        t, 0.4,
        which == 0 ? adversary_to_root(t) : adversary_to_first_child(t));
    auto virt_adv = which == 0 ? VirtualAdversary::kToRoot
                               : VirtualAdversary::kToFirstChild;
    for (std::uint64_t trial = 0; trial < 25; ++trial) {
      std::uint64_t ts = rng::derive(88, rng::kTrialTag, trial);
      VirtualCompleteDomain vd(shape, ts, 0.4, false, virt_adv);
      FullDomain fd(t, AdviceView::hashed(t, m, ts));
      Transcript a = run_walker(vd, WalkWeight::kPathDegreeProduct, true);
      Transcript b = run_walker(fd, WalkWeight::kPathDegreeProduct, true);
      CHECK(a.order == b.order);
      PfOutcome pa = probabilistic_following(vd, {0.6, 1u << 18}, ts);
      PfOutcome pb = probabilistic_following(fd, {0.6, 1u << 18}, ts);
      CHECK(pa.steps == pb.steps);
      CHECK(pa.censored == pb.censored);
    }
  }
}
