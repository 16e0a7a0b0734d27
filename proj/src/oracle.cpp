#include "nts/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "nts/domain.hpp"
#include "nts/memoryless.hpp"
#include "nts/queriers.hpp"
#include "nts/walkers.hpp"

namespace nts {

Rational rational_from_double(double v) {
  require(std::isfinite(v), Errc::kInvalidArgument,
          "cannot convert a non-finite double");
  if (v == 0.0) return Rational(0);
  int exp = 0;
  double fr = std::frexp(v, &exp);  // v = fr * 2^exp, |fr| in [0.5, 1)
  auto mant = static_cast<std::int64_t>(std::ldexp(fr, 53));
  exp -= 53;
  Rational r(mant);
  if (exp > 0)
    r *= Rational(boost::multiprecision::cpp_int(1) << exp);
  else if (exp < 0)
    r /= Rational(boost::multiprecision::cpp_int(1) << -exp);
  return r;
}

AlgoId parse_algo(std::string_view name) {
  if (name == "a_walk") return AlgoId::kWalk;
  if (name == "a_natural") return AlgoId::kNatural;
  if (name == "a_walk_uniform_theta") return AlgoId::kWalkUniformTheta;
  if (name == "a_sep") return AlgoId::kSep;
  if (name == "a_loop") return AlgoId::kLoop;
  if (name == "a_two_layers") return AlgoId::kTwoLayers;
  if (name == "pf") return AlgoId::kPf;
  fail(Errc::kInvalidArgument, "unknown algorithm: " + std::string(name));
}

std::string_view algo_name(AlgoId a) {
  switch (a) {
    case AlgoId::kWalk: return "a_walk";
    case AlgoId::kNatural: return "a_natural";
    case AlgoId::kWalkUniformTheta: return "a_walk_uniform_theta";
    case AlgoId::kSep: return "a_sep";
    case AlgoId::kLoop: return "a_loop";
    case AlgoId::kTwoLayers: return "a_two_layers";
    case AlgoId::kPf: return "pf";
  }
  return "?";
}

bool algo_is_walking(AlgoId a) {
  return a == AlgoId::kWalk || a == AlgoId::kNatural ||
         a == AlgoId::kWalkUniformTheta || a == AlgoId::kPf;
}

bool algo_is_querying(AlgoId a) { return a != AlgoId::kPf; }

std::uint64_t cost_on_advice(const Tree& t, const Advice& adv, AlgoId algo,
                             Metric metric, const AlgoParams& params) {
  AdviceView view = AdviceView::stored(t, adv);
  auto pick = [&](const Transcript& tr) {
    return metric == Metric::kMoves ? tr.moves : tr.queries;
  };
  switch (algo) {
    case AlgoId::kWalk:
      return pick(a_walk(t, view));
    case AlgoId::kNatural:
      return pick(a_natural(t, view));
    case AlgoId::kWalkUniformTheta:
      return pick(a_walk_uniform_theta(t, view));
    case AlgoId::kLoop:
      require(metric == Metric::kQueries, Errc::kInvalidArgument,
              "a_loop has no move metric");
      return a_loop(t, view).queries;
    case AlgoId::kSep:
      require(metric == Metric::kQueries, Errc::kInvalidArgument,
              "a_sep has no move metric");
      return a_sep(t, view, params.epsilon, nullptr, params.h_override).queries;
    case AlgoId::kTwoLayers:
      require(metric == Metric::kQueries, Errc::kInvalidArgument,
              "a_two_layers has no move metric");
      return a_two_layers(t, view, params.kappa1, params.kappa2,
                          params.epsilon)
          .queries;
    case AlgoId::kPf:
      fail(Errc::kInvalidArgument,
           "probabilistic following is not deterministic given advice");
  }
  fail(Errc::kInternal, "unhandled algorithm");
}

Rational pf_expected_steps(const Tree& t, const Advice& adv,
                           Rational lambda) {
  // Root the tree at the treasure. For u with parent u' toward the treasure,
  // E[u -> u'] * P(step to u') = 1 + sum over other neighbors v of
  // P(step to v) * E[v -> u]. Bottom-up, then sum along the source path.
  NodeId tau = t.treasure();
  // order nodes by decreasing distance from tau
  std::vector<NodeId> order(t.size());
  for (NodeId u = 0; u < t.size(); ++u) order[u] = u;
  std::vector<std::uint64_t> dist(t.size());
  for (NodeId u = 0; u < t.size(); ++u) dist[u] = t.distance(u, tau);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return dist[a] > dist[b];
  });

  std::vector<Rational> up(t.size(), Rational(0));  // E[u -> parent_tau(u)]
  Rational one(1);
  for (NodeId u : order) {
    if (u == tau) continue;
    NodeId toward = t.next_hop(u, tau);
    std::uint32_t deg = t.degree(u);
    Rational uniform = (one - lambda) / deg;
    Rational num(1);
    Rational p_toward = uniform;
    if (adv.pointer[u] == toward) p_toward += lambda;
    for (std::uint32_t i = 0; i < deg; ++i) {
      NodeId v = t.neighbor(u, i);
      if (v == toward) continue;
      Rational pv = uniform;
      if (adv.pointer[u] == v) pv += lambda;
      if (!pv.is_zero()) num += pv * up[v];
    }
    require(!p_toward.is_zero(), Errc::kInternal,
            "walk cannot reach the treasure");
    up[u] = num / p_toward;
  }

  Rational total(0);
  for (NodeId x = t.root(); x != tau; x = t.next_hop(x, tau)) total += up[x];
  return total;
}

namespace {

struct RationalSupport {
  NodeId node;
  std::vector<std::pair<NodeId, Rational>> options;
};

// advice_supports with exact probabilities: the per-node law is built from
// the exact dyadic value of the stored q, so enumeration sums are exact.
std::vector<RationalSupport> rational_supports(const Tree& t,
                                               const NoiseModel& m,
                                               std::uint32_t cap) {
  std::uint64_t carriers = t.size() - 1;
  require(carriers <= cap, Errc::kCap,
          "instance has " + std::to_string(carriers) +
              " advice nodes, enumeration cap is " + std::to_string(cap));
  std::vector<RationalSupport> out;
  for (NodeId u = 0; u < t.size(); ++u) {
    if (u == t.treasure()) continue;
    NodeId correct = t.next_hop(u, t.treasure());
    std::uint32_t deg = t.degree(u);
    Rational qu = rational_from_double(m.q[u]);
    RationalSupport s;
    s.node = u;
    if (m.mode == FaultMode::kRandom) {
      for (std::uint32_t i = 0; i < deg; ++i) {
        NodeId nb = t.neighbor(u, i);
        Rational p = qu / deg;
        if (nb == correct) p += 1 - qu;
        if (!p.is_zero()) s.options.emplace_back(nb, p);
      }
    } else {
      NodeId target = m.adversary[u];
      if (target == correct) {
        s.options.emplace_back(correct, Rational(1));
      } else {
        if (qu != 1) s.options.emplace_back(correct, 1 - qu);
        if (!qu.is_zero()) s.options.emplace_back(target, qu);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

Rational exact_expected_cost(const Tree& t, const NoiseModel& m, AlgoId algo,
                             Metric metric, const AlgoParams& params,
                             std::uint32_t cap) {
  if (algo == AlgoId::kPf)
    require(metric == Metric::kMoves, Errc::kInvalidArgument,
            "probabilistic following only counts moves");
  auto supports = rational_supports(t, m, cap);
  Rational lambda = rational_from_double(params.lambda);

  Advice adv;
  adv.pointer.assign(t.size(), kNoNode);
  adv.faulty.assign(t.size(), 0);

  Rational total(0);
  // depth-first product over per-node supports
  std::vector<std::uint32_t> choice(supports.size(), 0);
  std::vector<Rational> prefix(supports.size() + 1, Rational(1));
  std::size_t level = 0;
  for (;;) {
    if (level == supports.size()) {
      Rational cost =
          algo == AlgoId::kPf
              ? pf_expected_steps(t, adv, lambda)
              : Rational(cost_on_advice(t, adv, algo, metric, params));
      total += prefix[level] * cost;
      if (level == 0) break;
      --level;
      ++choice[level];
      continue;
    }
    auto& sup = supports[level];
    if (choice[level] >= sup.options.size()) {
      if (level == 0) break;
      choice[level] = 0;
      --level;
      ++choice[level];
      continue;
    }
    const auto& opt = sup.options[choice[level]];
    adv.pointer[sup.node] = opt.first;
    prefix[level + 1] = prefix[level] * opt.second;
    ++level;
  }
  return total;
}

std::vector<std::uint64_t> arrows_toward(const Tree& t, const Advice& adv) {
  // Every advice-bearing node w votes +1 toward all of the component its
  // advice points into; accumulate with a difference array over preorder
  // positions. Degree-1 nodes carry no information (their pointer has a
  // single possible value) and are skipped, matching the counting arguments
  // the ranking feeds.
  std::vector<std::int64_t> diff(t.size() + 1, 0);
  std::int64_t global = 0;
  for (NodeId w = 0; w < t.size(); ++w) {
    NodeId a = adv.pointer[w];
    if (a == kNoNode || t.degree(w) < 2) continue;
    if (a == t.parent(w)) {
      ++global;  // everything except w's subtree
      diff[t.tin(w)] -= 1;
      diff[t.tout(w)] += 1;
    } else {
      diff[t.tin(a)] += 1;
      diff[t.tout(a)] -= 1;
    }
  }
  std::vector<std::uint64_t> out(t.size());
  std::int64_t run = 0;
  std::vector<std::int64_t> at(t.size(), 0);
  for (std::size_t pos = 0; pos < t.size(); ++pos) {
    run += diff[pos];
    at[pos] = run;
  }
  for (NodeId u = 0; u < t.size(); ++u)
    out[u] = static_cast<std::uint64_t>(global + at[t.tin(u)]);
  return out;
}

std::vector<NodeId> optimal_bayes_order(const Tree& t, const Advice& adv) {
  auto arrows = arrows_toward(t, adv);
  std::vector<NodeId> leaves;
  for (NodeId u = 0; u < t.size(); ++u)
    if (t.is_leaf(u)) leaves.push_back(u);
  std::sort(leaves.begin(), leaves.end(), [&](NodeId a, NodeId b) {
    if (arrows[a] != arrows[b]) return arrows[a] > arrows[b];
    return a < b;
  });
  return leaves;
}

std::uint64_t count_beating_leaves(const Tree& t, const Advice& adv) {
  auto arrows = arrows_toward(t, adv);
  std::uint64_t tau_arrows = arrows[t.treasure()];
  std::uint64_t count = 0;
  for (NodeId u = 0; u < t.size(); ++u)
    if (t.is_leaf(u) && arrows[u] > tau_arrows) ++count;
  return count;
}

double uniform_choice_floor(std::uint64_t k) {
  require(k >= 1, Errc::kInvalidArgument, "need at least one object");
  return (static_cast<double>(k) + 1.0) / 2.0;
}

double simulate_uniform_scan(std::uint64_t k, std::uint64_t trials,
                             std::uint64_t seed) {
  rng::Stream s(rng::derive(seed, rng::kTrialTag));
  unsigned __int128 total = 0;
  for (std::uint64_t i = 0; i < trials; ++i)
    total += s.below(k) + 1;  // probes of a fixed scan until the hidden item
  return static_cast<double>(total) / static_cast<double>(trials);
}

TailCheck tail_check_weighted(std::span<const std::uint32_t> degrees,
                              std::span<const double> qs, double eps,
                              double m, std::uint64_t trials,
                              std::uint64_t seed) {
  require(degrees.size() == qs.size(), Errc::kInvalidArgument,
          "profile lengths differ");
  require(eps > 0 && eps < 1, Errc::kInvalidArgument, "eps must be in (0,1)");
  double log_bound = 0.0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    require(degrees[i] >= 2, Errc::kInvalidArgument, "degrees must be >= 2");
    require(qs[i] >= 0 && qs[i] < star_cap(degrees[i], eps),
            Errc::kInvalidArgument,
            "q profile violates the threshold condition");
    log_bound -= 0.5 * std::log(static_cast<double>(degrees[i]));
  }
  log_bound += static_cast<double>(degrees.size()) * std::log1p(-eps);
  log_bound -= 0.75 * m;

  rng::Stream s(rng::derive(seed, rng::kTrialTag));
  std::uint64_t hits = 0;
  for (std::uint64_t tr = 0; tr < trials; ++tr) {
    double sum = 0.0;
    for (std::size_t i = 0; i < degrees.size(); ++i) {
      double d = degrees[i], q = qs[i];
      double u = s.u01();
      double lw = std::log(d);
      if (u < q / d)
        sum += lw;
      else if (u < q * (1.0 - 1.0 / d))
        ;  // sideways
      else
        sum -= lw;
    }
    if (sum >= m) ++hits;
  }
  TailCheck c;
  c.trials = trials;
  c.empirical = static_cast<double>(hits) / static_cast<double>(trials);
  c.bound = std::exp(log_bound);
  c.se = std::sqrt(c.empirical * (1 - c.empirical) /
                   static_cast<double>(trials));
  return c;
}

TailCheck tail_check_regular(std::uint32_t delta, double q, std::uint32_t len,
                             std::uint32_t h, std::uint64_t trials,
                             std::uint64_t seed) {
  require(delta >= 2, Errc::kInvalidArgument, "delta must be >= 2");
  require(h <= len, Errc::kInvalidArgument, "need 0 <= h <= len");
  require(q >= 0 && q * std::sqrt(static_cast<double>(delta)) < 1.0 / 64.0,
          Errc::kInvalidArgument, "need q < c/sqrt(delta) with c < 1/64");
  double d = delta;
  rng::Stream s(rng::derive(seed, rng::kTrialTag));
  std::uint64_t hits = 0;
  for (std::uint64_t tr = 0; tr < trials; ++tr) {
    std::int64_t sum = 0;
    for (std::uint32_t i = 0; i < len; ++i) {
      double u = s.u01();
      if (u < q / d)
        ++sum;
      else if (u < q * (1.0 - 1.0 / d))
        ;  // sideways
      else
        --sum;
    }
    if (sum >= -static_cast<std::int64_t>(h)) ++hits;
  }
  TailCheck c;
  c.trials = trials;
  c.empirical = static_cast<double>(hits) / static_cast<double>(trials);
  c.bound = std::pow(4.0 * std::sqrt(d), h) * std::pow(d, -0.5 * len);
  c.se = std::sqrt(c.empirical * (1 - c.empirical) /
                   static_cast<double>(trials));
  return c;
}

}  // namespace nts
