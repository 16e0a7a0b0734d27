#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nts/rng.hpp"
#include "nts/tree.hpp"

namespace nts {

enum class FaultMode { kRandom, kSemiAdversarial };

// Per-node fault probabilities plus the fault mode. In the semi-adversarial
// mode every non-treasure node carries a designated neighbor its advice is
// forced to when the node comes up faulty.
struct NoiseModel {
  FaultMode mode = FaultMode::kRandom;
  std::vector<double> q;          // size n
  std::vector<NodeId> adversary;  // size n in semi-adversarial mode, else empty

  double max_q() const;

  static NoiseModel uniform(const Tree& t, double q);
  static NoiseModel semi_adversarial(const Tree& t, double q,
                                     std::vector<NodeId> adversary_map);
};

// Built-in adversaries. Nodes without the designated direction (the root for
// point-to-root, leaves for point-to-first-child) fall back to their first
// neighbor.
std::vector<NodeId> adversary_to_root(const Tree& t);
std::vector<NodeId> adversary_to_first_child(const Tree& t);

// Adversary-map file: one line "node neighbor" per non-treasure node.
std::vector<NodeId> parse_adversary_file(const Tree& t,
                                         const std::string& path);

// Per-node q override file: lines "node q", applied over the base scalar.
void apply_q_file(const Tree& t, NoiseModel& m, const std::string& path);

// The permanent advice of one trial. pointer[treasure] == kNoNode.
struct Advice {
  std::vector<NodeId> pointer;
  std::vector<std::uint8_t> faulty;
};

// Core single-node draw shared by every sampling path (materialized trees and
// arithmetic ones). Consumes one u01 for the fault flag and, when faulty in
// random mode, one bounded draw over the neighbors.
template <class NeighborFn>
NodeId draw_advice(std::uint64_t node_seed, double q_u, FaultMode mode,
                   NodeId correct, NodeId adversary_target,
                   std::uint32_t degree, NeighborFn&& neighbor,
                   bool* faulty_out = nullptr) {
  rng::Stream s(node_seed);
  bool faulty = s.u01() < q_u;
  if (faulty_out) *faulty_out = faulty;
  if (!faulty) return correct;
  if (mode == FaultMode::kRandom)
    return neighbor(static_cast<std::uint32_t>(s.below(degree)));
  return adversary_target;
}

// Advice of a single node under (tree, model, trial seed); deterministic and
// permanent: repeated calls return the same neighbor.
NodeId advice_at(const Tree& t, const NoiseModel& m, std::uint64_t trial_seed,
                 NodeId u, bool* faulty_out = nullptr);

Advice sample_advice(const Tree& t, const NoiseModel& m,
                     std::uint64_t trial_seed);

// Enumerates the advice distribution node by node, merging equal pointers
// (in random mode the correct neighbor carries p+q/deg, each wrong one
// q/deg). Probabilities are exact dyadic rationals of the stored doubles and
// sum to 1. Errors out when more than `cap` nodes carry advice.
struct AdviceSupport {
  NodeId node;
  std::vector<std::pair<NodeId, double>> options;  // pointer -> probability
};
std::vector<AdviceSupport> advice_supports(const Tree& t, const NoiseModel& m,
                                           std::uint32_t cap = 12);

// Condition on per-node fault probabilities under which the below-threshold
// guarantees hold: q_v < (1 - eps - deg^{-1/4}) / (sqrt(deg) + deg^{1/4}).
double star_cap(double degree, double eps);
std::vector<double> condition_star_max_q(const Tree& t, double eps);

}  // namespace nts
