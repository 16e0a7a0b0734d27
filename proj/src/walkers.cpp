#include "nts/walkers.hpp"

#include <algorithm>
#include <cmath>

namespace nts {

Transcript a_walk(const Tree& t, const AdviceView& adv, bool collect_order,
                  StepSink* sink) {
  FullDomain d(t, adv);
  return run_walker(d, WalkWeight::kPathDegreeProduct, collect_order, sink);
}

Transcript a_natural(const Tree& t, const AdviceView& adv, bool collect_order,
                     StepSink* sink) {
  FullDomain d(t, adv);
  return run_walker(d, WalkWeight::kArrowCount, collect_order, sink);
}

Transcript a_walk_uniform_theta(const Tree& t, const AdviceView& adv,
                                bool collect_order, StepSink* sink) {
  FullDomain d(t, adv);
  return run_walker(d, WalkWeight::kUniformLeafPrior, collect_order, sink);
}

bool pairwise_beats(const Tree& t, const Advice& adv, NodeId u, NodeId v) {
  require(u != v, Errc::kInvalidArgument, "pairwise comparison needs u != v");
  auto nodes = t.path(u, v);
  double lhs = 0.0;
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
    NodeId w = nodes[i];
    NodeId a = adv.pointer[w];
    require(a != kNoNode, Errc::kInvalidArgument,
            "advice missing on the comparison path");
    double lw = std::log(static_cast<double>(t.degree(w)));
    if (a == nodes[i - 1])
      lhs += lw;  // points toward u
    else if (a == nodes[i + 1])
      lhs -= lw;  // points toward v
  }
  double rhs = (2.0 / 3.0) * (log_beta(t, u) - log_beta(t, v));
  // same comparison lattice as the walker, so equal sums tie exactly
  return quantize_key(lhs) > quantize_key(rhs);
}

double walker_score(const Tree& t, const Advice& adv,
                    const std::vector<NodeId>& explored, NodeId u,
                    WalkWeight w) {
  double base = 0.0;
  switch (w) {
    case WalkWeight::kPathDegreeProduct:
      base = -(2.0 / 3.0) * log_beta(t, u);
      break;
    case WalkWeight::kUniformLeafPrior:
      base = (2.0 / 3.0) * (std::log(static_cast<double>(t.leaves_under(u))) -
                            std::log(static_cast<double>(t.leaf_count())));
      break;
    case WalkWeight::kArrowCount:
      base = 0.0;
      break;
  }
  double sum = 0.0;
  for (NodeId e : explored) {
    if (e == u) continue;
    NodeId a = adv.pointer[e];
    if (a == kNoNode) continue;
    bool toward = a == t.next_hop(e, u);
    if (w == WalkWeight::kArrowCount) {
      if (toward) sum += 1.0;
    } else if (!toward) {
      sum -= std::log(static_cast<double>(t.degree(e)));
    }
  }
  return base + sum;
}

}  // namespace nts
