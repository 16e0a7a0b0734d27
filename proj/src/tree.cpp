#include "nts/tree.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nts {

namespace {

std::uint64_t checked_count(unsigned __int128 v, std::uint64_t budget,
                            const char* what) {
  if (v > budget) {
    fail(Errc::kBudget, std::string(what) + " would need " +
                            std::to_string(static_cast<std::uint64_t>(
                                v > ~std::uint64_t{0} ? ~std::uint64_t{0}
                                                      : v)) +
                            " nodes, budget is " + std::to_string(budget));
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

Tree Tree::from_parents(std::uint64_t n, NodeId root, NodeId treasure,
                        std::vector<NodeId> parent) {
  require(n >= 1, Errc::kInvalidArgument, "tree needs at least one node");
  require(root < n, Errc::kInvalidArgument, "root id out of range");
  require(treasure < n, Errc::kInvalidArgument, "treasure id out of range");
  require(parent.size() == n, Errc::kInvalidArgument,
          "parent vector size mismatch");
  require(parent[root] == kNoNode, Errc::kInvalidArgument,
          "root must not have a parent");
  for (NodeId u = 0; u < n; ++u) {
    if (u == root) continue;
    require(parent[u] < n, Errc::kParse, "parent id out of range");
    require(parent[u] != u, Errc::kParse, "node cannot be its own parent");
  }
  Tree t;
  t.n_ = n;
  t.root_ = root;
  t.treasure_ = treasure;
  t.parent_ = std::move(parent);
  t.build_caches();
  return t;
}

void Tree::build_caches() {
  child_off_.assign(n_ + 1, 0);
  for (NodeId u = 0; u < n_; ++u) {
    if (u == root_) continue;
    ++child_off_[parent_[u] + 1];
  }
  for (std::uint64_t i = 0; i < n_; ++i) child_off_[i + 1] += child_off_[i];
  children_.resize(n_ ? n_ - 1 : 0);
  {
    std::vector<std::uint32_t> cursor(child_off_.begin(),
                                      child_off_.end() - 1);
    for (NodeId u = 0; u < n_; ++u) {  // ascending ids => sorted child lists
      if (u == root_) continue;
      children_[cursor[parent_[u]]++] = u;
    }
  }

  depth_.assign(n_, 0);
  tin_.assign(n_, 0);
  tout_.assign(n_, 0);
  leaves_under_.assign(n_, 0);
  max_depth_ = 0;

  // Iterative DFS; also validates connectivity (forests and cycles leave
  // nodes unvisited).
  std::vector<std::uint8_t> seen(n_, 0);
  std::vector<std::pair<NodeId, std::uint32_t>> stack;  // node, child index
  stack.reserve(64);
  std::uint32_t clock = 0;
  stack.emplace_back(root_, 0);
  seen[root_] = 1;
  tin_[root_] = clock++;
  std::uint64_t visited = 1;
  while (!stack.empty()) {
    auto& [u, ci] = stack.back();
    auto kids = children(u);
    if (ci < kids.size()) {
      NodeId c = kids[ci++];
      require(!seen[c], Errc::kParse, "cycle detected in tree description");
      seen[c] = 1;
      depth_[c] = depth_[u] + 1;
      max_depth_ = std::max(max_depth_, depth_[c]);
      tin_[c] = clock++;
      ++visited;
      stack.emplace_back(c, 0);
    } else {
      tout_[u] = clock;
      leaves_under_[u] = 0;
      if (kids.empty()) {
        leaves_under_[u] = 1;
      } else {
        for (NodeId c : kids) leaves_under_[u] += leaves_under_[c];
      }
      stack.pop_back();
    }
  }
  require(visited == n_, Errc::kParse,
          "tree description is disconnected (forest or cycle)");
}

void Tree::set_treasure(NodeId t) {
  require(t < n_, Errc::kInvalidArgument, "treasure id out of range");
  treasure_ = t;
}

NodeId Tree::next_hop(NodeId from, NodeId to) const {
  assert(from != to);
  if (in_subtree(to, from)) {
    // descend: find the child of `from` whose subtree holds `to`
    NodeId cur = to;
    while (parent_[cur] != from) cur = parent_[cur];
    return cur;
  }
  return parent_[from];
}

NodeId Tree::lca(NodeId u, NodeId v) const {
  while (u != v) {
    if (depth_[u] < depth_[v])
      v = parent_[v];
    else
      u = parent_[u];
  }
  return u;
}

std::uint64_t Tree::distance(NodeId u, NodeId v) const {
  NodeId a = lca(u, v);
  return (depth_[u] - depth_[a]) + (depth_[v] - depth_[a]);
}

std::vector<NodeId> Tree::path(NodeId u, NodeId v) const {
  NodeId a = lca(u, v);
  std::vector<NodeId> up, down;
  for (NodeId x = u; x != a; x = parent_[x]) up.push_back(x);
  up.push_back(a);
  for (NodeId x = v; x != a; x = parent_[x]) down.push_back(x);
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

std::string Tree::to_text() const {
  std::string out;
  out += std::to_string(n_);
  out += ' ';
  out += std::to_string(root_);
  out += ' ';
  out += std::to_string(treasure_);
  out += '\n';
  for (NodeId u = 0; u < n_; ++u) {
    if (u == root_) continue;
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(parent_[u]);
    out += '\n';
  }
  return out;
}

Tree Tree::from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::uint64_t n;
  NodeId root, treasure;
  if (!(in >> n >> root >> treasure))
    fail(Errc::kParse, "tree header must be: n root treasure");
  require(n >= 1, Errc::kParse, "node count must be positive");
  require(root < n, Errc::kParse, "root id out of range");
  require(treasure < n, Errc::kParse, "treasure id out of range");
  std::vector<NodeId> parent(n, kNoNode);
  std::vector<std::uint8_t> have(n, 0);
  NodeId u, p;
  std::uint64_t lines = 0;
  while (in >> u >> p) {
    require(u < n && p < n, Errc::kParse, "node id out of range");
    require(u != root, Errc::kParse, "root must not have a parent line");
    require(!have[u], Errc::kParse, "duplicate parent line");
    have[u] = 1;
    parent[u] = p;
    ++lines;
  }
  require(in.eof(), Errc::kParse, "malformed tree line");
  require(lines == n - 1, Errc::kParse,
          "expected exactly n-1 parent lines");
  return from_parents(n, root, treasure, std::move(parent));
}

void Tree::save(const std::string& path) const {
  std::ofstream out(path);
  require(static_cast<bool>(out), Errc::kIo, "cannot open " + path);
  out << to_text();
  require(static_cast<bool>(out), Errc::kIo, "write failed: " + path);
}

Tree Tree::load(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), Errc::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

// --- Generators -------------------------------------------------------------

Tree make_complete(const CompleteParams& p) {
  require(p.branching >= 1, Errc::kInvalidArgument, "branching must be >= 1");
  require(p.treasure_depth <= p.depth, Errc::kInvalidArgument,
          "treasure depth exceeds tree depth");
  std::uint32_t r = p.root_children ? p.root_children : p.branching;
  unsigned __int128 total = 1, level = 0;
  std::vector<std::uint64_t> level_size(p.depth + 1, 0);
  level_size[0] = 1;
  for (std::uint32_t d = 1; d <= p.depth; ++d) {
    level = (d == 1) ? r : level * p.branching;
    total += level;
    level_size[d] = checked_count(level, p.budget, "complete tree");
    checked_count(total, p.budget, "complete tree");
  }
  std::uint64_t n = static_cast<std::uint64_t>(total);
  std::vector<NodeId> parent(n, kNoNode);
  std::uint64_t off = 1, prev_off = 0;
  for (std::uint32_t d = 1; d <= p.depth; ++d) {
    std::uint32_t b = (d == 1) ? r : p.branching;
    for (std::uint64_t i = 0; i < level_size[d]; ++i)
      parent[off + i] = prev_off + i / b;
    prev_off = off;
    off += level_size[d];
  }
  // leftmost node of the treasure level
  std::uint64_t toff = 0;
  for (std::uint32_t d = 0; d < p.treasure_depth; ++d) toff += level_size[d];
  return Tree::from_parents(n, 0, toff, std::move(parent));
}

Tree make_complete_filled(std::uint32_t delta, std::uint64_t node_count,
                          std::uint64_t budget) {
  require(delta >= 2, Errc::kInvalidArgument, "delta must be >= 2");
  require(node_count >= 1, Errc::kInvalidArgument, "node count must be >= 1");
  checked_count(node_count, budget, "filled complete tree");
  std::uint32_t b = delta - 1;
  std::vector<NodeId> parent(node_count, kNoNode);
  // level sizes: 1, delta, delta*b, delta*b^2, ...
  std::uint64_t level_start = 0, level_size = 1, produced = 1;
  std::uint64_t last_level_start = 0;
  while (produced < node_count) {
    std::uint64_t next_size = (level_start == 0) ? delta : level_size * b;
    std::uint64_t next_start = level_start + level_size;
    std::uint64_t take = std::min(next_size, node_count - produced);
    std::uint32_t per = (level_start == 0) ? delta : b;
    for (std::uint64_t i = 0; i < take; ++i)
      parent[next_start + i] = level_start + i / per;
    produced += take;
    level_start = next_start;
    level_size = take;
    last_level_start = next_start;
  }
  NodeId treasure = node_count == 1 ? 0 : last_level_start;
  return Tree::from_parents(node_count, 0, treasure, std::move(parent));
}

Tree make_caterpillar(std::uint32_t spine_len, std::uint32_t star_degree,
                      std::uint32_t treasure_depth, std::uint64_t budget) {
  require(spine_len >= 1, Errc::kInvalidArgument, "spine length must be >= 1");
  require(star_degree >= 2, Errc::kInvalidArgument, "star degree must be >= 2");
  require(treasure_depth <= spine_len, Errc::kInvalidArgument,
          "treasure depth exceeds spine length");
  std::uint64_t L = spine_len;
  // pendant leaves per spine node so that every spine node has total degree
  // star_degree
  auto pendants = [&](std::uint64_t i) -> std::uint64_t {
    if (L == 1) return star_degree;  // a single spine node: its stars only
    if (i == 0 || i == L - 1) return star_degree - 1;
    return star_degree - 2;
  };
  unsigned __int128 total = L;
  for (std::uint64_t i = 0; i < L; ++i) total += pendants(i);
  std::uint64_t n = checked_count(total, budget, "caterpillar");
  std::vector<NodeId> parent(n, kNoNode);
  for (std::uint64_t i = 1; i < L; ++i) parent[i] = i - 1;
  std::uint64_t next = L;
  std::vector<NodeId> first_leaf(L, kNoNode);
  for (std::uint64_t i = 0; i < L; ++i) {
    first_leaf[i] = next;
    for (std::uint64_t k = 0; k < pendants(i); ++k) parent[next++] = i;
  }
  NodeId treasure =
      treasure_depth < L ? NodeId(treasure_depth) : first_leaf[L - 1];
  return Tree::from_parents(n, 0, treasure, std::move(parent));
}

Tree make_trimmed(std::uint32_t branching, std::uint32_t depth,
                  std::uint64_t budget) {
  require(branching >= 2, Errc::kInvalidArgument, "branching must be >= 2");
  require(depth >= 1, Errc::kInvalidArgument, "depth must be >= 1");
  // root, trimmed leaf, and branching-1 complete subtrees of depth-1
  unsigned __int128 sub = 0, pw = 1;
  for (std::uint32_t d = 0; d < depth; ++d) {
    sub += pw;
    pw *= branching;
  }
  unsigned __int128 total = 2 + static_cast<unsigned __int128>(branching - 1) * sub;
  std::uint64_t n = checked_count(total, budget, "trimmed tree");
  std::vector<NodeId> parent(n, kNoNode);
  // level 1: full children 1..branching-1, then the trimmed child (treasure)
  for (std::uint32_t i = 1; i <= branching; ++i) parent[i] = 0;
  NodeId treasure = branching;
  // BFS fill of the full subtrees
  std::uint64_t prev_start = 1, prev_count = branching - 1, off = branching + 1;
  for (std::uint32_t d = 2; d <= depth; ++d) {
    std::uint64_t count = prev_count * branching;
    for (std::uint64_t i = 0; i < count; ++i)
      parent[off + i] = prev_start + i / branching;
    prev_start = off;
    prev_count = count;
    off += count;
  }
  return Tree::from_parents(n, 0, treasure, std::move(parent));
}

namespace {

std::vector<std::uint64_t> parse_fields(std::string_view s, std::size_t lo,
                                        std::size_t hi, const char* what) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= s.size() && !s.empty()) {
    std::size_t comma = s.find(',', pos);
    std::string_view f = s.substr(pos, comma == s.npos ? s.npos : comma - pos);
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || p != f.data() + f.size())
      fail(Errc::kParse, std::string("bad generator parameter in ") + what);
    out.push_back(v);
    if (comma == s.npos) break;
    pos = comma + 1;
  }
  if (out.size() < lo || out.size() > hi)
    fail(Errc::kParse, std::string(what) + ": wrong number of parameters");
  return out;
}

}  // namespace

GeneratorSpec parse_generator(std::string_view spec) {
  std::size_t colon = spec.find(':');
  require(colon != spec.npos && colon > 0, Errc::kParse,
          "generator must look like name:params");
  std::string_view name = spec.substr(0, colon);
  std::string_view args = spec.substr(colon + 1);
  GeneratorSpec g;
  if (name == "complete") {
    auto f = parse_fields(args, 2, 3, "complete");
    require(f[0] >= 2, Errc::kParse, "complete: delta must be >= 2");
    g.kind = GeneratorSpec::Kind::kComplete;
    g.branching = static_cast<std::uint32_t>(f[0] - 1);
    g.root_children = static_cast<std::uint32_t>(f[0]);
    g.depth = static_cast<std::uint32_t>(f[1]);
    g.treasure_depth = static_cast<std::uint32_t>(f.size() > 2 ? f[2] : f[1]);
  } else if (name == "completeb") {
    auto f = parse_fields(args, 2, 4, "completeb");
    g.kind = GeneratorSpec::Kind::kComplete;
    g.branching = static_cast<std::uint32_t>(f[0]);
    g.depth = static_cast<std::uint32_t>(f[1]);
    g.treasure_depth = static_cast<std::uint32_t>(f.size() > 2 ? f[2] : f[1]);
    g.root_children = static_cast<std::uint32_t>(
        f.size() > 3 && f[3] ? f[3] : f[0]);
  } else if (name == "completen") {
    auto f = parse_fields(args, 2, 2, "completen");
    g.kind = GeneratorSpec::Kind::kFilled;
    g.delta = static_cast<std::uint32_t>(f[0]);
    g.count = f[1];
  } else if (name == "caterpillar") {
    auto f = parse_fields(args, 2, 3, "caterpillar");
    g.kind = GeneratorSpec::Kind::kCaterpillar;
    g.spine = static_cast<std::uint32_t>(f[0]);
    g.star = static_cast<std::uint32_t>(f[1]);
    g.treasure_depth = static_cast<std::uint32_t>(f.size() > 2 ? f[2] : f[0]);
  } else if (name == "trimmed") {
    auto f = parse_fields(args, 2, 2, "trimmed");
    g.kind = GeneratorSpec::Kind::kTrimmed;
    g.trim_branching = static_cast<std::uint32_t>(f[0]);
    g.trim_depth = static_cast<std::uint32_t>(f[1]);
  } else if (name == "path") {
    auto f = parse_fields(args, 1, 2, "path");
    require(f[0] >= 1, Errc::kParse, "path: need at least one node");
    g.kind = GeneratorSpec::Kind::kComplete;
    g.branching = 1;
    g.root_children = 1;
    g.depth = static_cast<std::uint32_t>(f[0] - 1);
    g.treasure_depth =
        static_cast<std::uint32_t>(f.size() > 1 ? f[1] : f[0] - 1);
  } else if (name == "star") {
    auto f = parse_fields(args, 1, 2, "star");
    require(f[0] >= 1, Errc::kParse, "star: need at least one leaf");
    g.kind = GeneratorSpec::Kind::kComplete;
    g.branching = static_cast<std::uint32_t>(f[0]);
    g.root_children = g.branching;
    g.depth = 1;
    g.treasure_depth = 1;
    if (f.size() > 1) {
      require(f[1] >= 1 && f[1] <= f[0], Errc::kParse,
              "star: treasure leaf out of range");
      g.treasure_override = f[1];
    }
  } else {
    fail(Errc::kParse, "unknown tree generator: " + std::string(name));
  }
  require(g.treasure_depth <= g.depth ||
              g.kind != GeneratorSpec::Kind::kComplete,
          Errc::kParse, "treasure depth exceeds tree depth");
  return g;
}

Tree materialize(const GeneratorSpec& g, std::uint64_t budget) {
  switch (g.kind) {
    case GeneratorSpec::Kind::kComplete: {
      CompleteParams p;
      p.branching = g.branching;
      p.root_children = g.root_children;
      p.depth = g.depth;
      p.treasure_depth = g.treasure_depth;
      p.budget = budget;
      Tree t = make_complete(p);
      if (g.treasure_override != kNoNode) t.set_treasure(g.treasure_override);
      return t;
    }
    case GeneratorSpec::Kind::kFilled:
      return make_complete_filled(g.delta, g.count, budget);
    case GeneratorSpec::Kind::kCaterpillar:
      return make_caterpillar(g.spine, g.star, g.treasure_depth, budget);
    case GeneratorSpec::Kind::kTrimmed:
      return make_trimmed(g.trim_branching, g.trim_depth, budget);
  }
  fail(Errc::kInternal, "unhandled generator kind");
}

Tree make_from_spec(std::string_view spec, std::uint64_t budget) {
  return materialize(parse_generator(spec), budget);
}

// --- Structural quantities ---------------------------------------------------

double log_beta(const Tree& t, NodeId u) {
  double s = 0.0;
  for (NodeId w = t.parent(u); w != kNoNode; w = t.parent(w))
    s += std::log(static_cast<double>(t.degree(w)));
  return s;
}

double beta(const Tree& t, NodeId u) {
  double b = 1.0;
  for (NodeId w = t.parent(u); w != kNoNode; w = t.parent(w))
    b *= static_cast<double>(t.degree(w));
  return b;
}

double theta(const Tree& t, NodeId u) {
  if (u == t.root()) return 1.0;
  double inv = static_cast<double>(t.degree(t.root()));
  for (NodeId w = t.parent(u); w != t.root(); w = t.parent(w))
    inv *= static_cast<double>(t.degree(w)) - 1.0;
  return 1.0 / inv;
}

std::pair<double, double> weighted_sums_check(const Tree& t, double c) {
  require(c > 0.0 && c < 1.0, Errc::kInvalidArgument, "c must be in (0,1)");
  double s0 = 0.0, s1 = 0.0;
  // beta along the DFS via parent products would be O(n depth); do a BFS with
  // per-node running product instead.
  std::vector<double> inv_beta(t.size(), 0.0);
  inv_beta[t.root()] = 1.0;
  for (NodeId u : bfs_order(t)) {
    double d = static_cast<double>(t.depth_of(u));
    double w = inv_beta[u] * std::pow(c, d);
    s0 += w;
    s1 += d * w;
    double ib = inv_beta[u] / static_cast<double>(t.degree(u));
    for (NodeId ch : t.children(u)) inv_beta[ch] = ib;
  }
  return {s0, s1};
}

std::uint32_t max_degree(const Tree& t) {
  std::uint32_t d = 1;
  for (NodeId u = 0; u < t.size(); ++u) d = std::max(d, t.degree(u));
  return d;
}

std::vector<NodeId> bfs_order(const Tree& t) {
  std::vector<NodeId> order;
  order.reserve(t.size());
  order.push_back(t.root());
  for (std::size_t i = 0; i < order.size(); ++i)
    for (NodeId c : t.children(order[i])) order.push_back(c);
  return order;
}

// --- Centroid decomposition --------------------------------------------------

bool SeparatorTree::contains(const Node& nd, NodeId u) {
  return std::binary_search(nd.component.begin(), nd.component.end(), u);
}

SeparatorTree centroid_decomposition(const Tree& t) {
  SeparatorTree out;
  std::vector<std::uint8_t> removed(t.size(), 0);

  // component as a sorted node list; sizes computed locally each phase
  struct Task {
    std::vector<NodeId> comp;
    int parent;
    std::uint32_t level;
  };
  std::vector<Task> work;
  {
    std::vector<NodeId> all(t.size());
    for (NodeId u = 0; u < t.size(); ++u) all[u] = u;
    work.push_back({std::move(all), -1, 0});
  }

  std::vector<std::uint64_t> sub(t.size(), 0);
  while (!work.empty()) {
    Task task = std::move(work.back());
    work.pop_back();
    auto& comp = task.comp;
    const std::uint64_t m = comp.size();

    // local rooted orientation: DFS from comp[0] over non-removed neighbors
    std::vector<NodeId> order;
    order.reserve(m);
    std::vector<NodeId> par(m, kNoNode);  // parallel to `order`
    // map via sorted comp: index lookup
    auto idx_of = [&](NodeId u) {
      return static_cast<std::size_t>(
          std::lower_bound(comp.begin(), comp.end(), u) - comp.begin());
    };
    std::vector<std::uint8_t> vis(m, 0);
    std::vector<NodeId> stack{comp[0]};
    vis[0] = 1;
    std::vector<NodeId> parent_of(m, kNoNode);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      order.push_back(u);
      auto visit = [&](NodeId v) {
        if (removed[v]) return;
        std::size_t vi = idx_of(v);
        if (vi >= m || comp[vi] != v || vis[vi]) return;
        vis[vi] = 1;
        parent_of[vi] = u;
        stack.push_back(v);
      };
      if (u != t.root() && !removed[t.parent(u)]) visit(t.parent(u));
      for (NodeId c : t.children(u)) visit(c);
    }

    // subtree sizes in reverse DFS order
    for (NodeId u : comp) sub[u] = 1;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      NodeId p = parent_of[idx_of(*it)];
      if (p != kNoNode) sub[p] += sub[*it];
    }

    // centroid: smallest id whose every piece has size <= m/2
    NodeId best = kNoNode;
    for (NodeId u : comp) {
      std::uint64_t worst = m - sub[u];
      auto consider = [&](NodeId v) {
        if (removed[v]) return;
        std::size_t vi = idx_of(v);
        if (vi < m && comp[vi] == v && parent_of[vi] == u)
          worst = std::max(worst, sub[v]);
      };
      for (NodeId c : t.children(u)) consider(c);
      if (worst <= m / 2 && (best == kNoNode || u < best)) best = u;
    }
    require(best != kNoNode, Errc::kInternal, "no centroid found");

    int self = static_cast<int>(out.nodes.size());
    out.nodes.push_back({});
    auto& nd = out.nodes[self];
    nd.separator = best;
    nd.parent = task.parent;
    nd.component = comp;
    nd.level = task.level;
    out.max_level = std::max(out.max_level, task.level);
    if (task.parent >= 0)
      out.nodes[task.parent].children.push_back(self);
    else
      out.root = self;

    removed[best] = 1;
    // split into sub-components
    std::vector<std::uint8_t> taken(m, 0);
    taken[idx_of(best)] = 1;
    auto neighbors_in = [&](NodeId u, auto&& fn) {
      if (u != t.root() && !removed[t.parent(u)]) {
        std::size_t vi = idx_of(t.parent(u));
        if (vi < m && comp[vi] == t.parent(u)) fn(t.parent(u));
      }
      for (NodeId c : t.children(u))
        if (!removed[c]) {
          std::size_t vi = idx_of(c);
          if (vi < m && comp[vi] == c) fn(c);
        }
    };
    for (NodeId seed_node : comp) {
      std::size_t si = idx_of(seed_node);
      if (taken[si]) continue;
      std::vector<NodeId> piece;
      std::vector<NodeId> st{seed_node};
      taken[si] = 1;
      while (!st.empty()) {
        NodeId u = st.back();
        st.pop_back();
        piece.push_back(u);
        neighbors_in(u, [&](NodeId v) {
          std::size_t vi = idx_of(v);
          if (!taken[vi]) {
            taken[vi] = 1;
            st.push_back(v);
          }
        });
      }
      std::sort(piece.begin(), piece.end());
      work.push_back({std::move(piece), self, task.level + 1});
    }
  }
  return out;
}

}  // namespace nts
