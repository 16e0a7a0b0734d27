#include "nts/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nts/domain.hpp"
#include "nts/memoryless.hpp"
#include "nts/parallel.hpp"
#include "nts/queriers.hpp"
#include "nts/walkers.hpp"

#include <nlohmann/json.hpp>

namespace nts {

namespace {

bool metric_supported(AlgoId algo, Metric m) {
  return m == Metric::kMoves ? algo_is_walking(algo) : algo_is_querying(algo);
}

std::vector<Metric> default_metrics(AlgoId algo) {
  std::vector<Metric> out;
  if (algo_is_walking(algo)) out.push_back(Metric::kMoves);
  if (algo_is_querying(algo)) out.push_back(Metric::kQueries);
  return out;
}

struct ParsedModel {
  FaultMode mode = FaultMode::kRandom;
  enum class Adversary { kNone, kRoot, kChild, kFile } adversary =
      Adversary::kNone;
  std::string file;
};

ParsedModel parse_model(const std::string& text) {
  ParsedModel m;
  if (text.empty() || text == "random") return m;
  if (text.rfind("semiadv:", 0) == 0) {
    m.mode = FaultMode::kSemiAdversarial;
    std::string rest = text.substr(8);
    if (rest == "root") {
      m.adversary = ParsedModel::Adversary::kRoot;
    } else if (rest == "child") {
      m.adversary = ParsedModel::Adversary::kChild;
    } else if (rest.rfind("file=", 0) == 0) {
      m.adversary = ParsedModel::Adversary::kFile;
      m.file = rest.substr(5);
      require(!m.file.empty(), Errc::kParse, "semiadv:file= needs a path");
    } else {
      fail(Errc::kParse, "unknown adversary: " + rest);
    }
    return m;
  }
  fail(Errc::kParse, "unknown noise model: " + text);
}

// What a spec resolves to: either a materialized tree + model or an
// arithmetic complete tree (identical trial results either way).
struct Instance {
  std::optional<Tree> tree;
  std::optional<NoiseModel> model;
  std::optional<SeparatorTree> decomposition;
  std::optional<CompleteShape> shape;
  VirtualAdversary virt_adv = VirtualAdversary::kNone;
  double q = 0.0;
  bool virt = false;
};

bool virtual_eligible(const ExperimentSpec& spec, const GeneratorSpec* gen,
                      const ParsedModel& model) {
  if (!gen || !gen->complete_family()) return false;
  if (gen->treasure_override != kNoNode) return false;
  if (!spec.model.q_file.empty()) return false;
  if (model.adversary == ParsedModel::Adversary::kFile) return false;
  return spec.algo == AlgoId::kWalk || spec.algo == AlgoId::kNatural ||
         spec.algo == AlgoId::kPf;
}

Instance resolve(const ExperimentSpec& spec) {
  Instance inst;
  inst.q = spec.model.q;
  ParsedModel pm = parse_model(spec.model.text);

  std::optional<GeneratorSpec> gen;
  bool is_file = spec.tree.rfind("file:", 0) == 0;
  std::string path = is_file ? spec.tree.substr(5) : spec.tree;
  if (!is_file && spec.tree.find(':') != std::string::npos)
    gen = parse_generator(spec.tree);

  if (virtual_eligible(spec, gen ? &*gen : nullptr, pm)) {
    inst.virt = true;
    inst.shape = gen->kind == GeneratorSpec::Kind::kComplete
                     ? CompleteShape::make(gen->root_children, gen->branching,
                                           gen->depth, gen->treasure_depth)
                     : CompleteShape::make_filled(gen->delta, gen->count);
    switch (pm.adversary) {
      case ParsedModel::Adversary::kNone:
        inst.virt_adv = VirtualAdversary::kNone;
        break;
      case ParsedModel::Adversary::kRoot:
        inst.virt_adv = VirtualAdversary::kToRoot;
        break;
      case ParsedModel::Adversary::kChild:
        inst.virt_adv = VirtualAdversary::kToFirstChild;
        break;
      case ParsedModel::Adversary::kFile:
        fail(Errc::kInternal, "file adversary cannot be virtual");
    }
    return inst;
  }

  inst.tree = gen ? materialize(*gen, spec.budget) : Tree::load(path);
  require(inst.tree->size() <= spec.budget, Errc::kBudget,
          "tree exceeds the node budget");
  const Tree& t = *inst.tree;
  if (pm.mode == FaultMode::kRandom) {
    inst.model = NoiseModel::uniform(t, spec.model.q);
  } else {
    std::vector<NodeId> map;
    switch (pm.adversary) {
      case ParsedModel::Adversary::kRoot: map = adversary_to_root(t); break;
      case ParsedModel::Adversary::kChild:
        map = adversary_to_first_child(t);
        break;
      case ParsedModel::Adversary::kFile:
        map = parse_adversary_file(t, pm.file);
        break;
      case ParsedModel::Adversary::kNone:
        fail(Errc::kParse, "semi-adversarial model needs an adversary");
    }
    inst.model = NoiseModel::semi_adversarial(t, spec.model.q, std::move(map));
  }
  if (!spec.model.q_file.empty())
    apply_q_file(t, *inst.model, spec.model.q_file);
  if (spec.algo == AlgoId::kSep || spec.algo == AlgoId::kTwoLayers)
    inst.decomposition = centroid_decomposition(t);
  return inst;
}

struct TrialOut {
  std::uint64_t moves = 0;
  std::uint64_t queries = 0;
  bool censored = false;
};

TrialOut run_trial(const ExperimentSpec& spec, const Instance& inst,
                   std::uint64_t trial_seed) {
  TrialOut out;
  if (inst.virt) {
    VirtualCompleteDomain dom(*inst.shape, trial_seed, inst.q, false,
                              inst.virt_adv);
    if (spec.algo == AlgoId::kPf) {
      PfParams p{spec.params.lambda, spec.params.step_cap};
      PfOutcome o = probabilistic_following(dom, p, trial_seed);
      out.moves = o.steps;
      out.censored = o.censored;
    } else {
      WalkWeight w = spec.algo == AlgoId::kWalk
                         ? WalkWeight::kPathDegreeProduct
                         : WalkWeight::kArrowCount;
      Transcript tr = run_walker(dom, w);
      out.moves = tr.moves;
      out.queries = tr.queries;
    }
    return out;
  }

  const Tree& t = *inst.tree;
  AdviceView adv = AdviceView::hashed(t, *inst.model, trial_seed);
  switch (spec.algo) {
    case AlgoId::kWalk: {
      Transcript tr = a_walk(t, adv);
      out.moves = tr.moves;
      out.queries = tr.queries;
      break;
    }
    case AlgoId::kNatural: {
      Transcript tr = a_natural(t, adv);
      out.moves = tr.moves;
      out.queries = tr.queries;
      break;
    }
    case AlgoId::kWalkUniformTheta: {
      Transcript tr = a_walk_uniform_theta(t, adv);
      out.moves = tr.moves;
      out.queries = tr.queries;
      break;
    }
    case AlgoId::kLoop:
      out.queries = a_loop(t, adv).queries;
      break;
    case AlgoId::kSep:
      out.queries = a_sep(t, adv, spec.params.epsilon, &*inst.decomposition,
                          spec.params.h_override)
                        .queries;
      break;
    case AlgoId::kTwoLayers:
      out.queries = a_two_layers(t, adv, spec.params.kappa1,
                                 spec.params.kappa2, spec.params.epsilon,
                                 &*inst.decomposition)
                        .queries;
      break;
    case AlgoId::kPf: {
      FullDomain dom(t, adv);
      PfParams p{spec.params.lambda, spec.params.step_cap};
      PfOutcome o = probabilistic_following(dom, p, trial_seed);
      out.moves = o.steps;
      out.censored = o.censored;
      break;
    }
  }
  return out;
}

MetricStats summarize(std::vector<std::uint64_t>& values) {
  MetricStats s;
  if (values.empty()) return s;
  s.present = true;
  unsigned __int128 sum = 0, sum2 = 0;
  for (std::uint64_t v : values) {
    sum += v;
    sum2 += static_cast<unsigned __int128>(v) * v;
  }
  double n = static_cast<double>(values.size());
  s.mean = static_cast<double>(sum) / n;
  if (values.size() > 1) {
    long double var =
        (static_cast<long double>(sum2) -
         static_cast<long double>(sum) * static_cast<long double>(sum) / n) /
        (n - 1.0);
    s.stderror = std::sqrt(std::max(0.0L, var) / n);
  }
  std::sort(values.begin(), values.end());
  std::size_t k = values.size();
  s.median = k % 2 ? static_cast<double>(values[k / 2])
                   : (static_cast<double>(values[k / 2 - 1]) +
                      static_cast<double>(values[k / 2])) /
                         2.0;
  std::size_t i95 = (95 * k + 99) / 100;  // ceil(0.95 k), 1-indexed
  s.p95 = static_cast<double>(values[std::min(k - 1, i95 - 1)]);
  return s;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void validate(const ExperimentSpec& spec) {
  require(spec.trials >= 1, Errc::kInvalidArgument,
          "trial count must be >= 1");
  require(spec.model.q >= 0.0 && spec.model.q <= 1.0, Errc::kInvalidArgument,
          "q must be in [0,1]");
  require(!spec.tree.empty(), Errc::kInvalidArgument, "tree is required");
  for (Metric m : spec.metrics)
    require(metric_supported(spec.algo, m), Errc::kInvalidArgument,
            std::string("metric not supported by ") +
                std::string(algo_name(spec.algo)));
  if (spec.algo == AlgoId::kPf)
    require(spec.params.lambda > 0.0 && spec.params.lambda <= 1.0,
            Errc::kInvalidArgument, "lambda must be in (0,1]");
  parse_model(spec.model.text);
}

ResultRow run(const ExperimentSpec& spec, int threads) {
  validate(spec);
  auto start = std::chrono::steady_clock::now();
  Instance inst = resolve(spec);

  std::vector<TrialOut> slots(spec.trials);
  parallel_for(spec.trials, threads, [&](std::uint64_t i) {
    std::uint64_t ts = rng::derive(spec.seed, rng::kTrialTag, i);
    slots[i] = run_trial(spec, inst, ts);
  });

  std::vector<Metric> metrics =
      spec.metrics.empty() ? default_metrics(spec.algo) : spec.metrics;
  std::uint64_t censored = 0;
  std::vector<std::uint64_t> moves, queries;
  for (const TrialOut& o : slots) {
    if (o.censored) {
      ++censored;
      continue;
    }
    moves.push_back(o.moves);
    queries.push_back(o.queries);
  }
  ResultRow row;
  row.spec = spec;
  row.spec.metrics = metrics;
  for (Metric m : metrics) {
    if (m == Metric::kMoves)
      row.moves = summarize(moves);
    else
      row.queries = summarize(queries);
  }
  row.censored_fraction =
      static_cast<double>(censored) / static_cast<double>(spec.trials);
  row.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return row;
}

std::vector<ResultRow> sweep(const std::string& axis,
                             const std::vector<std::string>& values,
                             const ExperimentSpec& base, int threads) {
  std::vector<ResultRow> rows;
  for (const std::string& v : values) {
    ExperimentSpec spec = base;
    if (axis == "q")
      spec.model.q = std::stod(v);
    else if (axis == "lambda")
      spec.params.lambda = std::stod(v);
    else if (axis == "epsilon")
      spec.params.epsilon = std::stod(v);
    else if (axis == "kappa1")
      spec.params.kappa1 = std::stod(v);
    else if (axis == "kappa2")
      spec.params.kappa2 = std::stod(v);
    else if (axis == "trials")
      spec.trials = std::stoull(v);
    else if (axis == "seed")
      spec.seed = std::stoull(v);
    else if (axis == "step_cap")
      spec.params.step_cap = std::stoull(v);
    else if (axis == "tree")
      spec.tree = v;
    else
      fail(Errc::kInvalidArgument, "unknown sweep axis: " + axis);
    spec.name = base.name + "/" + axis + "=" + v;
    rows.push_back(run(spec, threads));
  }
  return rows;
}

std::string csv_header() {
  return "name,tree,algo,model,q,epsilon,lambda,kappa1,kappa2,step_cap,"
         "trials,seed,moves_mean,moves_stderr,moves_median,moves_p95,"
         "queries_mean,queries_stderr,queries_median,queries_p95,"
         "censored_frac";
}

std::string csv_row(const ResultRow& row) {
  const ExperimentSpec& s = row.spec;
  std::string out;
  bool first = true;
  auto add = [&](const std::string& v) {
    if (!first) out += ',';
    first = false;
    if (v.find_first_of(",\"\n") == std::string::npos) {
      out += v;
      return;
    }
    out += '"';
    for (char c : v) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
  };
  add(s.name);
  add(s.tree);
  add(std::string(algo_name(s.algo)));
  add(s.model.text);
  add(fmt_double(s.model.q));
  add(fmt_double(s.params.epsilon));
  add(fmt_double(s.params.lambda));
  add(fmt_double(s.params.kappa1));
  add(fmt_double(s.params.kappa2));
  add(std::to_string(s.params.step_cap));
  add(std::to_string(s.trials));
  add(std::to_string(s.seed));
  auto stats = [&](const MetricStats& m) {
    if (!m.present) {
      add("");
      add("");
      add("");
      add("");
      return;
    }
    add(fmt_double(m.mean));
    add(fmt_double(m.stderror));
    add(fmt_double(m.median));
    add(fmt_double(m.p95));
  };
  stats(row.moves);
  stats(row.queries);
  add(fmt_double(row.censored_fraction));
  return out;
}

std::string jsonl_row(const ResultRow& row) {
  nlohmann::json j;
  const ExperimentSpec& s = row.spec;
  j["name"] = s.name;
  j["tree"] = s.tree;
  j["algo"] = std::string(algo_name(s.algo));
  j["model"] = s.model.text;
  j["q"] = s.model.q;
  j["epsilon"] = s.params.epsilon;
  j["lambda"] = s.params.lambda;
  j["kappa1"] = s.params.kappa1;
  j["kappa2"] = s.params.kappa2;
  j["step_cap"] = s.params.step_cap;
  j["trials"] = s.trials;
  j["seed"] = s.seed;
  auto stats = [&](const char* key, const MetricStats& m) {
    if (!m.present) return;
    j[key] = {{"mean", m.mean},
              {"stderr", m.stderror},
              {"median", m.median},
              {"p95", m.p95}};
  };
  stats("moves", row.moves);
  stats("queries", row.queries);
  j["censored_frac"] = row.censored_fraction;
  return j.dump();
}

// --- Experiment files ---------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t nxt = s.find(sep, pos);
    if (nxt == std::string::npos) {
      out.push_back(trim(s.substr(pos)));
      break;
    }
    out.push_back(trim(s.substr(pos, nxt - pos)));
    pos = nxt + 1;
  }
  return out;
}

void apply_key(ExperimentRun& run, const std::string& key,
               const std::string& value, std::string& sweep_axis) {
  ExperimentSpec& s = run.base;
  if (key == "tree")
    s.tree = value;
  else if (key == "algo")
    s.algo = parse_algo(value);
  else if (key == "model")
    s.model.text = value;
  else if (key == "q")
    s.model.q = std::stod(value);
  else if (key == "q_file")
    s.model.q_file = value;
  else if (key == "trials")
    s.trials = std::stoull(value);
  else if (key == "seed")
    s.seed = std::stoull(value);
  else if (key == "epsilon")
    s.params.epsilon = std::stod(value);
  else if (key == "lambda")
    s.params.lambda = std::stod(value);
  else if (key == "kappa1")
    s.params.kappa1 = std::stod(value);
  else if (key == "kappa2")
    s.params.kappa2 = std::stod(value);
  else if (key == "step_cap")
    s.params.step_cap = std::stoull(value);
  else if (key == "h")
    s.params.h_override = static_cast<std::uint32_t>(std::stoul(value));
  else if (key == "budget")
    s.budget = std::stoull(value);
  else if (key == "metrics") {
    s.metrics.clear();
    for (const std::string& m : split(value, ',')) {
      if (m == "moves")
        s.metrics.push_back(Metric::kMoves);
      else if (m == "queries")
        s.metrics.push_back(Metric::kQueries);
      else
        fail(Errc::kParse, "unknown metric: " + m);
    }
  } else if (key == "sweep_axis") {
    sweep_axis = value;
  } else if (key == "sweep_values") {
    char sep = sweep_axis == "tree" ? ';' : ',';
    run.sweep_over = {sweep_axis, split(value, sep)};
  } else {
    fail(Errc::kParse, "unknown experiment key: " + key);
  }
}

}  // namespace

std::vector<ExperimentRun> parse_experiment_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), Errc::kIo, "cannot open " + path);
  std::vector<ExperimentRun> runs;
  std::string line, sweep_axis;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      require(line.back() == ']', Errc::kParse,
              "bad section header at line " + std::to_string(lineno));
      runs.push_back({});
      runs.back().base.name = trim(line.substr(1, line.size() - 2));
      sweep_axis.clear();
      continue;
    }
    require(!runs.empty(), Errc::kParse,
            "key before any [section] at line " + std::to_string(lineno));
    std::size_t eq = line.find('=');
    require(eq != std::string::npos, Errc::kParse,
            "expected key=value at line " + std::to_string(lineno));
    apply_key(runs.back(), trim(line.substr(0, eq)),
              trim(line.substr(eq + 1)), sweep_axis);
  }
  for (auto& r : runs) {
    if (r.sweep_over && r.sweep_over->first.empty())
      fail(Errc::kParse, "sweep_values without sweep_axis in section " +
                             r.base.name);
  }
  return runs;
}

std::vector<ResultRow> run_experiment_file(const std::string& path,
                                           int threads) {
  std::vector<ResultRow> rows;
  for (const ExperimentRun& r : parse_experiment_file(path)) {
    if (r.sweep_over) {
      auto sub = sweep(r.sweep_over->first, r.sweep_over->second, r.base,
                       threads);
      rows.insert(rows.end(), sub.begin(), sub.end());
    } else {
      rows.push_back(run(r.base, threads));
    }
  }
  return rows;
}

// --- Threshold verification -----------------------------------------------------

BelowThresholdReport verify_below_threshold(
    const std::vector<std::uint32_t>& deltas,
    const std::vector<std::uint32_t>& depths, double q_cap_fraction,
    std::uint64_t trials, std::uint64_t seed, double max_spread,
    int threads) {
  BelowThresholdReport rep;
  rep.spread_ok = true;
  for (std::uint32_t delta : deltas) {
    double q = q_cap_fraction * star_cap(delta, 0.0);
    double lo = 0.0, hi = 0.0;
    for (std::uint32_t d : depths) {
      ExperimentSpec spec;
      spec.name = "below_threshold";
      spec.tree = "complete:" + std::to_string(delta) + "," +
                  std::to_string(d) + "," + std::to_string(d);
      spec.algo = AlgoId::kWalk;
      spec.model.q = q;
      spec.trials = trials;
      spec.seed = seed;
      spec.metrics = {Metric::kMoves};
      ResultRow row = run(spec, threads);
      double ratio = row.moves.mean /
                     (static_cast<double>(d) * std::sqrt(double(delta)));
      rep.points.push_back({delta, d, q, row.moves.mean, ratio});
      lo = lo == 0.0 ? ratio : std::min(lo, ratio);
      hi = std::max(hi, ratio);
      rep.global_constant = std::max(rep.global_constant, ratio);
    }
    double spread = lo > 0 ? hi / lo : 0.0;
    rep.worst_spread = std::max(rep.worst_spread, spread);
    if (spread > max_spread) rep.spread_ok = false;
  }
  return rep;
}

AboveThresholdReport verify_above_threshold(
    std::uint32_t delta, double q, const std::vector<std::uint32_t>& depths,
    std::uint64_t base_trials, std::uint64_t seed, int threads) {
  AboveThresholdReport rep;
  for (std::uint32_t d : depths) {
    CompleteParams p;
    p.branching = delta - 1;
    p.root_children = delta;
    p.depth = d;
    p.treasure_depth = d;
    Tree t = make_complete(p);
    NoiseModel m = NoiseModel::uniform(t, q);
    // keep the per-depth work roughly flat
    std::uint64_t trials =
        std::max<std::uint64_t>(100, base_trials / (1ull << (2 * (d - depths.front()))));
    std::vector<std::uint64_t> counts(trials);
    parallel_for(trials, threads, [&](std::uint64_t i) {
      std::uint64_t ts = rng::derive(seed, rng::kTrialTag, i);
      Advice adv = sample_advice(t, m, ts);
      counts[i] = count_beating_leaves(t, adv);
    });
    unsigned __int128 sum = 0;
    for (auto c : counts) sum += c;
    rep.points.push_back(
        {d, static_cast<double>(sum) / static_cast<double>(trials), trials});
  }
  // least-squares slope of log(mean) on depth
  double mx = 0, my = 0;
  std::size_t k = rep.points.size();
  std::vector<double> xs(k), ys(k);
  for (std::size_t i = 0; i < k; ++i) {
    xs[i] = rep.points[i].depth;
    ys[i] = std::log(std::max(rep.points[i].mean_count, 1e-9));
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double cov = 0, var = 0;
  for (std::size_t i = 0; i < k; ++i) {
    cov += (xs[i] - mx) * (ys[i] - my);
    var += (xs[i] - mx) * (xs[i] - mx);
  }
  rep.fitted_factor = var > 0 ? std::exp(cov / var) : 0.0;
  return rep;
}

}  // namespace nts
