#include "nts/noise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace nts {

double NoiseModel::max_q() const {
  double m = 0.0;
  for (double v : q) m = std::max(m, v);
  return m;
}

NoiseModel NoiseModel::uniform(const Tree& t, double q) {
  require(q >= 0.0 && q <= 1.0, Errc::kInvalidArgument,
          "q must be in [0,1]");
  NoiseModel m;
  m.mode = FaultMode::kRandom;
  m.q.assign(t.size(), q);
  return m;
}

NoiseModel NoiseModel::semi_adversarial(const Tree& t, double q,
                                        std::vector<NodeId> adversary_map) {
  require(q >= 0.0 && q <= 1.0, Errc::kInvalidArgument,
          "q must be in [0,1]");
  require(adversary_map.size() == t.size(), Errc::kInvalidArgument,
          "adversary map must cover every node");
  for (NodeId u = 0; u < t.size(); ++u) {
    if (u == t.treasure()) continue;
    require(adversary_map[u] != kNoNode && t.adjacent(u, adversary_map[u]),
            Errc::kInvalidArgument,
            "adversary target must be a neighbor of its node");
  }
  NoiseModel m;
  m.mode = FaultMode::kSemiAdversarial;
  m.q.assign(t.size(), q);
  m.adversary = std::move(adversary_map);
  return m;
}

std::vector<NodeId> adversary_to_root(const Tree& t) {
  std::vector<NodeId> map(t.size(), kNoNode);
  for (NodeId u = 0; u < t.size(); ++u) {
    if (u == t.treasure()) continue;
    map[u] = (u == t.root()) ? t.neighbor(u, 0) : t.parent(u);
  }
  return map;
}

std::vector<NodeId> adversary_to_first_child(const Tree& t) {
  std::vector<NodeId> map(t.size(), kNoNode);
  for (NodeId u = 0; u < t.size(); ++u) {
    if (u == t.treasure()) continue;
    auto kids = t.children(u);
    map[u] = kids.empty() ? t.neighbor(u, 0) : kids.front();
  }
  return map;
}

std::vector<NodeId> parse_adversary_file(const Tree& t,
                                         const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), Errc::kIo, "cannot open " + path);
  std::vector<NodeId> map(t.size(), kNoNode);
  NodeId u, v;
  while (in >> u >> v) {
    require(u < t.size() && v < t.size(), Errc::kParse,
            "adversary map: node id out of range");
    require(u != t.treasure(), Errc::kParse,
            "adversary map: treasure carries no advice");
    require(t.adjacent(u, v), Errc::kParse,
            "adversary map: target is not a neighbor");
    require(map[u] == kNoNode, Errc::kParse,
            "adversary map: duplicate entry");
    map[u] = v;
  }
  require(in.eof(), Errc::kParse, "adversary map: malformed line");
  for (NodeId w = 0; w < t.size(); ++w)
    require(w == t.treasure() || map[w] != kNoNode, Errc::kParse,
            "adversary map: missing entry for node " + std::to_string(w));
  return map;
}

void apply_q_file(const Tree& t, NoiseModel& m, const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), Errc::kIo, "cannot open " + path);
  NodeId u;
  double q;
  while (in >> u >> q) {
    require(u < t.size(), Errc::kParse, "q file: node id out of range");
    require(q >= 0.0 && q <= 1.0, Errc::kParse, "q file: q out of [0,1]");
    m.q[u] = q;
  }
  require(in.eof(), Errc::kParse, "q file: malformed line");
}

NodeId advice_at(const Tree& t, const NoiseModel& m, std::uint64_t trial_seed,
                 NodeId u, bool* faulty_out) {
  if (u == t.treasure()) {
    if (faulty_out) *faulty_out = false;
    return kNoNode;
  }
  NodeId correct = t.next_hop(u, t.treasure());
  NodeId adv = m.mode == FaultMode::kSemiAdversarial ? m.adversary[u] : kNoNode;
  return draw_advice(
      rng::derive(trial_seed, rng::kAdviceTag, u), m.q[u], m.mode, correct,
      adv, t.degree(u), [&](std::uint32_t i) { return t.neighbor(u, i); },
      faulty_out);
}

Advice sample_advice(const Tree& t, const NoiseModel& m,
                     std::uint64_t trial_seed) {
  require(m.mode != FaultMode::kSemiAdversarial || !m.adversary.empty(),
          Errc::kInvalidArgument,
          "semi-adversarial model needs an adversary map");
  Advice a;
  a.pointer.assign(t.size(), kNoNode);
  a.faulty.assign(t.size(), 0);
  for (NodeId u = 0; u < t.size(); ++u) {
    bool f = false;
    a.pointer[u] = advice_at(t, m, trial_seed, u, &f);
    a.faulty[u] = f ? 1 : 0;
  }
  return a;
}

std::vector<AdviceSupport> advice_supports(const Tree& t, const NoiseModel& m,
                                           std::uint32_t cap) {
  std::uint64_t carriers = t.size() - 1;
  require(carriers <= cap, Errc::kCap,
          "instance has " + std::to_string(carriers) +
              " advice nodes, enumeration cap is " + std::to_string(cap));
  std::vector<AdviceSupport> out;
  for (NodeId u = 0; u < t.size(); ++u) {
    if (u == t.treasure()) continue;
    NodeId correct = t.next_hop(u, t.treasure());
    std::uint32_t deg = t.degree(u);
    AdviceSupport s;
    s.node = u;
    if (m.mode == FaultMode::kRandom) {
      double qu = m.q[u];
      for (std::uint32_t i = 0; i < deg; ++i) {
        NodeId nb = t.neighbor(u, i);
        double p = qu / deg + (nb == correct ? 1.0 - qu : 0.0);
        if (p > 0.0) s.options.emplace_back(nb, p);
      }
    } else {
      double qu = m.q[u];
      NodeId target = m.adversary[u];
      if (target == correct) {
        s.options.emplace_back(correct, 1.0);
      } else {
        if (1.0 - qu > 0.0) s.options.emplace_back(correct, 1.0 - qu);
        if (qu > 0.0) s.options.emplace_back(target, qu);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

double star_cap(double degree, double eps) {
  double quarter = std::pow(degree, 0.25);
  return (1.0 - eps - 1.0 / quarter) / (std::sqrt(degree) + quarter);
}

std::vector<double> condition_star_max_q(const Tree& t, double eps) {
  require(eps > 0.0 && eps < 1.0, Errc::kInvalidArgument,
          "eps must be in (0,1)");
  std::vector<double> out(t.size());
  for (NodeId u = 0; u < t.size(); ++u)
    out[u] = star_cap(static_cast<double>(t.degree(u)), eps);
  return out;
}

}  // namespace nts
