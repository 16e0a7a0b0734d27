#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nts/oracle.hpp"
#include "nts/tree.hpp"

// Reproducible Monte-Carlo engine. A ResultRow is a pure function of its
// ExperimentSpec: per-trial seeds derive from (seed, trial index), trials
// write independent slots, and aggregation runs in trial order with exact
// integer sums. Wall time is measured but never serialized, so rendered rows
// are bit-identical across reruns and worker counts.

namespace nts {

struct ModelSpec {
  std::string text = "random";  // random | semiadv:root | semiadv:child |
                                // semiadv:file=PATH
  double q = 0.0;
  std::string q_file;  // optional per-node overrides
};

struct ExperimentSpec {
  std::string name = "experiment";
  std::string tree;  // generator description or file path
  AlgoId algo = AlgoId::kWalk;
  ModelSpec model;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  AlgoParams params;
  std::vector<Metric> metrics;  // empty: all metrics the algorithm supports
  std::uint64_t budget = Tree::kDefaultNodeBudget;
};

struct MetricStats {
  bool present = false;
  double mean = 0.0;
  double stderror = 0.0;
  double median = 0.0;
  double p95 = 0.0;
};

struct ResultRow {
  ExperimentSpec spec;
  MetricStats moves;
  MetricStats queries;
  double censored_fraction = 0.0;
  double wall_ms = 0.0;  // informational; excluded from CSV/JSONL
};

void validate(const ExperimentSpec& spec);
ResultRow run(const ExperimentSpec& spec, int threads = 0);

// One row per value; `axis` is one of q, lambda, epsilon, kappa1, kappa2,
// trials, seed, step_cap, tree.
std::vector<ResultRow> sweep(const std::string& axis,
                             const std::vector<std::string>& values,
                             const ExperimentSpec& base, int threads = 0);

std::string csv_header();
std::string csv_row(const ResultRow& row);
std::string jsonl_row(const ResultRow& row);

// Declarative experiment file: "[name]" sections of key=value lines
// (tree, algo, model, q, q_file, trials, seed, epsilon, lambda, kappa1,
// kappa2, step_cap, metrics, budget, sweep_axis, sweep_values). '#' starts a
// comment.
struct ExperimentRun {
  ExperimentSpec base;
  std::optional<std::pair<std::string, std::vector<std::string>>> sweep_over;
};
std::vector<ExperimentRun> parse_experiment_file(const std::string& path);

std::vector<ResultRow> run_experiment_file(const std::string& path,
                                           int threads = 0);

// --- Threshold verification ---------------------------------------------------

// Below threshold: mean moves of the walking algorithm, normalized by
// d*sqrt(delta), stays flat in d and bounded across delta.
struct BelowThresholdReport {
  struct Point {
    std::uint32_t delta;
    std::uint32_t depth;
    double q;
    double mean_moves;
    double ratio;  // mean / (d sqrt(delta))
  };
  std::vector<Point> points;
  double worst_spread = 0.0;   // max over delta of max/min ratio
  double global_constant = 0.0;
  bool spread_ok = false;
};
BelowThresholdReport verify_below_threshold(
    const std::vector<std::uint32_t>& deltas,
    const std::vector<std::uint32_t>& depths, double q_cap_fraction,
    std::uint64_t trials, std::uint64_t seed, double max_spread,
    int threads = 0);

// Above threshold: the expected number of leaves that beat the treasure
// grows geometrically with the depth; reports the fitted per-level factor.
struct AboveThresholdReport {
  struct Point {
    std::uint32_t depth;
    double mean_count;
    std::uint64_t trials;
  };
  std::vector<Point> points;
  double fitted_factor = 0.0;
};
AboveThresholdReport verify_above_threshold(std::uint32_t delta, double q,
                                            const std::vector<std::uint32_t>& depths,
                                            std::uint64_t base_trials,
                                            std::uint64_t seed,
                                            int threads = 0);

}  // namespace nts
