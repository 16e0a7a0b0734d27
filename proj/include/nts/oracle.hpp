#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>
#include <vector>

#include "nts/noise.hpp"
#include "nts/tree.hpp"

// Ground truth on small instances: expectations by exhaustive enumeration of
// the advice distribution, kept in exact rationals so oracle tests are
// bit-stable. Doubles only appear at the comparison boundary.

namespace nts {

using Rational = boost::multiprecision::cpp_rational;

// Exact dyadic rational of a finite double.
Rational rational_from_double(double v);

enum class AlgoId {
  kWalk,
  kNatural,
  kWalkUniformTheta,
  kSep,
  kLoop,
  kTwoLayers,
  kPf,
};
enum class Metric { kMoves, kQueries };

AlgoId parse_algo(std::string_view name);
std::string_view algo_name(AlgoId a);
bool algo_is_walking(AlgoId a);   // produces a move count
bool algo_is_querying(AlgoId a);  // produces a query count

struct AlgoParams {
  double epsilon = 0.2;
  double lambda = 0.75;
  double kappa1 = 0;  // <= 0: default from epsilon
  double kappa2 = 0;
  std::uint32_t h_override = 0;  // separator ball radius; 0: from epsilon
  std::uint64_t step_cap = 1'000'000'000;
};

// Cost of one deterministic run under a fixed advice assignment.
std::uint64_t cost_on_advice(const Tree& t, const Advice& adv, AlgoId algo,
                             Metric metric, const AlgoParams& params);

// Expected steps of probabilistic following under fixed advice, solved
// exactly by the one-step recursion on the treasure-rooted tree.
Rational pf_expected_steps(const Tree& t, const Advice& adv, Rational lambda);

// Expectation over the full advice distribution. Every algorithm id is
// deterministic given the advice except kPf, whose per-advice cost is the
// exact hitting time above. Errors out beyond the enumeration cap.
Rational exact_expected_cost(const Tree& t, const NoiseModel& m, AlgoId algo,
                             Metric metric, const AlgoParams& params,
                             std::uint32_t cap = 12);

// Leaves ordered by decreasing number of arrows pointing at them (ties by
// lowest id); equals the posterior-likelihood order for a uniform prior.
std::vector<NodeId> optimal_bayes_order(const Tree& t, const Advice& adv);

// Number of arrows pointing at each node (whole-tree counts, O(n)).
// Advice at degree-1 nodes is skipped: it has a single possible value and
// carries no information about the treasure.
std::vector<std::uint64_t> arrows_toward(const Tree& t, const Advice& adv);

// Exact count of leaves u with |arrows toward u| > |arrows toward treasure|.
std::uint64_t count_beating_leaves(const Tree& t, const Advice& adv);

// (k+1)/2: expected probes of any fixed scan order over a uniformly hidden
// item among k objects.
double uniform_choice_floor(std::uint64_t k);
double simulate_uniform_scan(std::uint64_t k, std::uint64_t trials,
                             std::uint64_t seed);

// Empirical tail vs the analytic bound it must stay under.
struct TailCheck {
  double empirical = 0.0;
  double bound = 0.0;
  double se = 0.0;
  std::uint64_t trials = 0;
};

// X_i in {-log d_i, 0, +log d_i} with probs (p_i + q_i/d_i, q_i(1-2/d_i),
// q_i/d_i); bound (1-eps)^l e^{-3m/4} prod d_i^{-1/2}. Degrees must be >= 2
// and every q_i must satisfy the threshold condition at eps.
TailCheck tail_check_weighted(std::span<const std::uint32_t> degrees,
                              std::span<const double> qs, double eps,
                              double m, std::uint64_t trials,
                              std::uint64_t seed);

// X in {-1,0,1} with probs (1-q, q(1-2/delta), q/delta); q < c/sqrt(delta),
// c < 1/64; bound (4 sqrt(delta))^h delta^{-l/2} on P(sum >= -h).
TailCheck tail_check_regular(std::uint32_t delta, double q, std::uint32_t len,
                             std::uint32_t h, std::uint64_t trials,
                             std::uint64_t seed);

}  // namespace nts
