#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "nts/tree.hpp"
#include "test_support.hpp"

using namespace nts;

TEST_CASE("complete generator: smallest nontrivial tree") {
  Tree t = make_complete({.branching = 2, .depth = 1, .treasure_depth = 1});
  CHECK(t.size() == 3);
  CHECK(t.root() == 0);
  CHECK(t.is_leaf(t.treasure()));
  CHECK(t.treasure_depth() == 1);
}

TEST_CASE("complete generator: 3-ary depth 2 counts") {
  Tree t = make_complete({.branching = 3, .depth = 2, .treasure_depth = 2});
  CHECK(t.size() == 13);  // 1 + 3 + 9
  CHECK(t.depth() == 2);
  CHECK(t.treasure_depth() == 2);
}

TEST_CASE("complete generator: node budget") {
  CompleteParams p{.branching = 10, .depth = 6, .treasure_depth = 6};
  CHECK_THROWS_AS(make_complete(p), Error);  // 1,111,111 > 1e6
  p.budget = 2'000'000;
  CHECK(make_complete(p).size() == 1'111'111);
}

TEST_CASE("caterpillar: single spine node is a star") {
  Tree t = make_caterpillar(1, 3, 1);
  CHECK(t.size() == 4);
  CHECK(t.degree(0) == 3);
  CHECK(t.parent(t.treasure()) == 0);
  CHECK(t.treasure_depth() == 1);
}

TEST_CASE("caterpillar: spine 5 star 4 sizes to at most spine*degree") {
  Tree t = make_caterpillar(5, 4, 5);
  CHECK(t.size() == 17);
  CHECK(t.size() <= 5 * 4);
  CHECK(t.treasure_depth() == 5);
  for (NodeId s = 0; s < 5; ++s) CHECK(t.degree(s) == 4);
}

TEST_CASE("caterpillar: degenerate inputs rejected") {
  CHECK_THROWS_AS(make_caterpillar(0, 3, 0), Error);
  CHECK_THROWS_AS(make_caterpillar(3, 1, 1), Error);
}

TEST_CASE("trimmed generator") {
  Tree small = make_trimmed(2, 2);
  CHECK(small.size() == 5);  // root, treasure leaf, full depth-2 subtree
  CHECK(small.treasure_depth() == 1);
  CHECK(small.is_leaf(small.treasure()));

  // node count by direct formula: complete(3,3) minus one child subtree
  Tree t = make_trimmed(3, 3);
  std::uint64_t full = 1 + 3 + 9 + 27, subtree = 1 + 3 + 9;
  CHECK(t.size() == full - subtree + 1);
  CHECK(t.size() == 28);

  for (std::uint32_t b : {2u, 3u, 4u})
    for (std::uint32_t d : {1u, 2u, 4u})
      CHECK(make_trimmed(b, d).treasure_depth() == 1);
}

TEST_CASE("beta on the complete binary tree") {
  Tree t = make_complete({.branching = 2, .depth = 3, .treasure_depth = 3});
  NodeId d1 = t.children(t.root())[0];
  NodeId d2 = t.children(d1)[0];
  CHECK(beta(t, d1) == doctest::Approx(2.0));  // root degree 2
  CHECK(beta(t, d2) == doctest::Approx(6.0));  // 2 * 3 (internal degree 3)

  // independent path-walk cross-check
  double prod = 1.0;
  for (NodeId w = t.parent(d2); w != kNoNode; w = t.parent(w))
    prod *= t.degree(w);
  CHECK(beta(t, d2) == doctest::Approx(prod));
  CHECK(std::exp(log_beta(t, d2)) == doctest::Approx(prod));
}

TEST_CASE("theta: definition and leaf total") {
  Tree t = make_complete({.branching = 2, .depth = 2, .treasure_depth = 2});
  CHECK(theta(t, t.root()) == doctest::Approx(1.0));
  for (NodeId c : t.children(t.root()))
    CHECK(theta(t, c) == doctest::Approx(0.5));

  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Tree r = test::random_tree(40, seed);
    double sum = 0.0;
    for (NodeId u = 0; u < r.size(); ++u)
      if (r.is_leaf(u)) sum += theta(r, u);
    CHECK(sum == doctest::Approx(1.0));
  }
}

TEST_CASE("1/beta <= theta <= 1 across generators and random trees") {
  std::vector<Tree> trees;
  trees.push_back(
      make_complete({.branching = 3, .depth = 3, .treasure_depth = 3}));
  trees.push_back(make_caterpillar(6, 4, 3));
  trees.push_back(make_trimmed(3, 3));
  trees.push_back(make_complete_filled(5, 77));
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    trees.push_back(test::random_tree(30 + 7 * seed, seed));
  for (const Tree& t : trees) {
    for (NodeId u = 0; u < t.size(); ++u) {
      double th = theta(t, u);
      CHECK(th <= 1.0 + 1e-12);
      CHECK(1.0 / beta(t, u) <= th + 1e-12);
    }
  }
}

TEST_CASE("weighted sums: frozen example and the two bounds") {
  Tree t = make_complete({.branching = 2, .depth = 2, .treasure_depth = 2});
  auto [s0, s1] = weighted_sums_check(t, 0.5);
  // direct summation: 1 + 2*(0.5/2) + 4*(0.25/6)
  double expect0 = 1.0 + 2 * (0.5 / 2.0) + 4 * (0.25 / 6.0);
  CHECK(s0 == doctest::Approx(expect0));
  CHECK(s0 == doctest::Approx(1.6666667));
  CHECK(s0 <= 1.0 / (1.0 - 0.5));
  CHECK(s1 <= 0.5 / 0.25);

  // c -> 0: only the root term survives
  auto [t0, t1] = weighted_sums_check(t, 1e-9);
  CHECK(t0 == doctest::Approx(1.0));
  CHECK(t1 == doctest::Approx(0.0).epsilon(1e-6));

  auto [c0, c1] = weighted_sums_check(make_caterpillar(10, 5, 5), 0.9);
  CHECK(c0 <= 1.0 / 0.1);
  CHECK(c1 <= 0.9 / 0.01);
}

TEST_CASE("weighted sums hold on 100 random trees across the c grid") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Tree t = test::random_tree(10 + (seed % 13) * 9, 1000 + seed);
    for (double c : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
      auto [s0, s1] = weighted_sums_check(t, c);
      CHECK(s0 <= 1.0 / (1.0 - c) + 1e-9);
      CHECK(s1 <= c / ((1.0 - c) * (1.0 - c)) + 1e-9);
    }
  }
}

TEST_CASE("centroid decomposition: path, depth bound, halving") {
  Tree path = make_from_spec("path:3");
  SeparatorTree dec = centroid_decomposition(path);
  CHECK(dec.nodes[dec.root].separator == 1);  // middle node

  Tree bin = make_complete({.branching = 2, .depth = 3, .treasure_depth = 3});
  CHECK(bin.size() == 15);
  SeparatorTree bdec = centroid_decomposition(bin);
  CHECK(bdec.max_level + 1 <= 4);  // ceil(log2 15)

  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    Tree t = test::random_tree(2 + seed * 17, 55 + seed);
    SeparatorTree d = centroid_decomposition(t);
    std::uint32_t log2n = 0;
    while ((1ull << log2n) < t.size()) ++log2n;
    CHECK(d.max_level <= log2n);
    std::uint64_t covered = 0;
    for (const auto& nd : d.nodes) {
      for (int ch : nd.children)
        CHECK(d.nodes[ch].component.size() <= nd.component.size() / 2);
      ++covered;
    }
    CHECK(covered == t.size());  // one decomposition node per tree node
  }
}

TEST_CASE("serialize / parse round trip is the identity") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Tree t = test::random_tree(1 + seed * 11, 99 + seed);
    Tree back = Tree::from_text(t.to_text());
    REQUIRE(back.size() == t.size());
    CHECK(back.root() == t.root());
    CHECK(back.treasure() == t.treasure());
    for (NodeId u = 0; u < t.size(); ++u) CHECK(back.parent(u) == t.parent(u));
    CHECK(back.to_text() == t.to_text());
  }
}

TEST_CASE("parser rejects malformed descriptions") {
  CHECK_THROWS_AS(Tree::from_text("3 0 0\n1 0\n"), Error);  // missing line
  CHECK_THROWS_AS(Tree::from_text("3 0 0\n1 0\n2 0\n1 2\n"), Error);  // dup
  CHECK_THROWS_AS(Tree::from_text("3 0 0\n1 2\n2 1\n"), Error);  // cycle
  CHECK_THROWS_AS(Tree::from_text("4 0 0\n1 0\n2 3\n3 2\n"), Error);  // forest
  CHECK_THROWS_AS(Tree::from_text("3 0 5\n1 0\n2 0\n"), Error);  // treasure
  CHECK_THROWS_AS(Tree::from_text("3 0 0\n1 0\n7 0\n"), Error);  // bad id
  CHECK_THROWS_AS(Tree::from_text("3 0 0\n0 1\n2 0\n"), Error);  // root line
  CHECK_THROWS_AS(Tree::from_text("nonsense"), Error);
}

TEST_CASE("breadth-first order is a permutation starting at the root") {
  Tree path = make_from_spec("path:3");
  CHECK(bfs_order(path) == std::vector<NodeId>{0, 1, 2});

  Tree t = test::random_tree(64, 7);
  auto o = bfs_order(t);
  CHECK(o.size() == t.size());
  CHECK(o.front() == t.root());
  std::set<NodeId> seen(o.begin(), o.end());
  CHECK(seen.size() == t.size());
  CHECK(bfs_order(make_from_spec("path:1")) == std::vector<NodeId>{0});
}

TEST_CASE("filled complete trees take arbitrary sizes") {
  Tree t = make_complete_filled(8, 512);
  CHECK(t.size() == 512);
  CHECK(max_degree(t) == 8);
  CHECK(t.depth_of(t.treasure()) == t.depth());
  // leftmost node of the deepest level
  NodeId cur = t.root();
  for (std::uint32_t d = 0; d < t.depth(); ++d) cur = t.children(cur)[0];
  CHECK(cur == t.treasure());
}

TEST_CASE("path and distance helpers") {
  Tree t = make_complete({.branching = 2, .depth = 3, .treasure_depth = 3});
  NodeId a = 7, b = 10;  // two depth-3 leaves
  auto p = t.path(a, b);
  CHECK(p.front() == a);
  CHECK(p.back() == b);
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    CHECK(t.adjacent(p[i], p[i + 1]));
  CHECK(t.distance(a, b) == p.size() - 1);
  CHECK(t.next_hop(a, b) == p[1]);
}

TEST_CASE("generator strings") {
  CHECK(make_from_spec("complete:3,2,2").size() == 10);  // root 3, branching 2
  CHECK(make_from_spec("completeb:3,2").size() == 13);
  CHECK(make_from_spec("star:5").size() == 6);
  CHECK(make_from_spec("star:5,2").treasure() == 2);
  CHECK(make_from_spec("path:7").treasure_depth() == 6);
  CHECK_THROWS_AS(make_from_spec("complete:3"), Error);
  CHECK_THROWS_AS(make_from_spec("frob:1,2"), Error);
  CHECK_THROWS_AS(make_from_spec("complete:3,2,9"), Error);
  CHECK_THROWS_AS(make_from_spec("star:5,9"), Error);
}
