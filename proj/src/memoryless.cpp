#include "nts/memoryless.hpp"

#include <cmath>

#include "nts/parallel.hpp"

namespace nts {

namespace {

// Ordinary least squares slope of y on x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double cov = 0, var = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - mx) * (y[i] - my);
    var += (x[i] - mx) * (x[i] - mx);
  }
  return var > 0 ? cov / var : 0.0;
}

}  // namespace

GrowthFit pf_hitting_growth(std::uint32_t delta, double q, double lambda,
                            const std::vector<std::uint32_t>& depths,
                            std::uint64_t trials, std::uint64_t step_cap,
                            std::uint64_t seed, int threads) {
  GrowthFit fit;
  fit.depths = depths;
  PfParams params{lambda, step_cap};
  for (std::uint32_t D : depths) {
    CompleteShape shape = CompleteShape::make(delta, delta - 1, D, D);
    std::vector<std::uint64_t> steps(trials, 0);
    std::vector<std::uint8_t> censored(trials, 0);
    parallel_for(trials, threads, [&](std::uint64_t i) {
      std::uint64_t ts = rng::derive(seed, rng::kTrialTag, i);
      VirtualCompleteDomain dom(shape, ts, q, false, VirtualAdversary::kNone);
      PfOutcome o = probabilistic_following(dom, params, ts);
      steps[i] = o.steps;
      censored[i] = o.censored ? 1 : 0;
    });
    unsigned __int128 total = 0;
    std::uint64_t kept = 0, cut = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
      if (censored[i]) {
        ++cut;
        continue;
      }
      total += steps[i];
      ++kept;
    }
    double mean = kept ? static_cast<double>(total) / kept
                       : static_cast<double>(step_cap);
    fit.mean_steps.push_back(mean);
    fit.censored_rate.push_back(static_cast<double>(cut) / trials);
  }
  std::vector<double> xs(depths.begin(), depths.end());
  std::vector<double> ys;
  for (double m : fit.mean_steps) ys.push_back(std::log(std::max(m, 1.0)));
  fit.slope = ols_slope(xs, ys);
  return fit;
}

}  // namespace nts
