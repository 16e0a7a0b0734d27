#pragma once

#include <cstdint>
#include <vector>

#include "nts/domain.hpp"
#include "nts/walkers.hpp"

namespace nts {

// Probabilistic following: listen to the advice with probability lambda,
// otherwise take a uniform random step. lambda = 1 (pure following) is
// allowed for the noiseless exactness checks.
struct PfParams {
  double lambda = 0.75;
  std::uint64_t step_cap = 1'000'000'000;
};

struct PfOutcome {
  std::uint64_t steps = 0;
  bool censored = false;  // step cap hit before the treasure
};

template <class Domain>
PfOutcome probabilistic_following(const Domain& d, const PfParams& p,
                                  std::uint64_t trial_seed,
                                  StepSink* sink = nullptr) {
  require(p.lambda > 0.0 && p.lambda <= 1.0, Errc::kInvalidArgument,
          "lambda must be in (0,1]");
  rng::Stream walk(rng::derive(trial_seed, rng::kWalkTag));
  NodeId pos = d.root();
  NodeId tau = d.treasure();
  PfOutcome out;
  while (pos != tau) {
    if (out.steps >= p.step_cap) {
      out.censored = true;
      return out;
    }
    NodeId next;
    if (walk.u01() < p.lambda) {
      next = d.advice(pos);
    } else {
      next = d.neighbor(
          pos, static_cast<std::uint32_t>(walk.below(d.neighbor_count(pos))));
    }
    pos = next;
    ++out.steps;
    if (sink) (*sink)("move", pos, out.steps, 0);
  }
  return out;
}

// Fits log(mean steps) against depth for a family of complete trees; the
// growth rate certifies the above-threshold blow-up. Levels where every
// trial censors contribute the cap as a floor value (reported).
struct GrowthFit {
  std::vector<std::uint32_t> depths;
  std::vector<double> mean_steps;      // over uncensored trials (cap if none)
  std::vector<double> censored_rate;
  double slope = 0.0;                  // of log(mean) vs depth
};

GrowthFit pf_hitting_growth(std::uint32_t delta, double q, double lambda,
                            const std::vector<std::uint32_t>& depths,
                            std::uint64_t trials, std::uint64_t step_cap,
                            std::uint64_t seed, int threads = 0);

}  // namespace nts
