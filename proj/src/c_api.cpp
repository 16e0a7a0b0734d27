#include "nts.h"

#include <cstring>
#include <fstream>
#include <string>

#include "nts/acceptance.hpp"
#include "nts/domain.hpp"
#include "nts/harness.hpp"
#include "nts/memoryless.hpp"
#include "nts/queriers.hpp"
#include "nts/walkers.hpp"

using namespace nts;

namespace {

thread_local std::string g_last_error;

nts_status code_of(Errc c) {
  switch (c) {
    case Errc::kInvalidArgument: return NTS_ERR_INVALID_ARGUMENT;
    case Errc::kParse: return NTS_ERR_PARSE;
    case Errc::kIo: return NTS_ERR_IO;
    case Errc::kBudget: return NTS_ERR_BUDGET;
    case Errc::kCap: return NTS_ERR_CAP;
    case Errc::kUnsupported: return NTS_ERR_UNSUPPORTED;
    case Errc::kInternal: return NTS_ERR_INTERNAL;
  }
  return NTS_ERR_INTERNAL;
}

template <class F>
nts_status guarded(F&& f) {
  try {
    f();
    return NTS_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return code_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NTS_ERR_INTERNAL;
  }
}

Metric parse_metric(const char* metric) {
  std::string m = metric ? metric : "";
  if (m == "moves") return Metric::kMoves;
  if (m == "queries") return Metric::kQueries;
  fail(Errc::kInvalidArgument, "unknown metric: " + m);
}

ExperimentSpec build_spec(const char* tree_spec, const char* model, double q,
                          const char* q_file, const char* algorithm,
                          const nts_sim_params* params, uint64_t budget) {
  require(tree_spec && *tree_spec, Errc::kInvalidArgument,
          "tree spec is required");
  require(algorithm && *algorithm, Errc::kInvalidArgument,
          "algorithm is required");
  ExperimentSpec s;
  s.tree = tree_spec;
  s.algo = parse_algo(algorithm);
  s.model.text = model && *model ? model : "random";
  s.model.q = q;
  if (q_file && *q_file) s.model.q_file = q_file;
  if (params) {
    require(params->trials >= 1, Errc::kInvalidArgument,
            "trial count must be >= 1");
    s.trials = params->trials;
    s.seed = params->seed;
    s.params.epsilon = params->epsilon;
    s.params.lambda = params->lambda;
    s.params.kappa1 = params->kappa1;
    s.params.kappa2 = params->kappa2;
    s.params.step_cap = params->step_cap;
  }
  if (budget) s.budget = budget;
  return s;
}

}  // namespace

struct nts_tree {
  Tree tree;
};
struct nts_result {
  ResultRow row;
};

extern "C" {

const char* nts_status_name(nts_status status) {
  switch (status) {
    case NTS_OK: return "ok";
    case NTS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case NTS_ERR_PARSE: return "parse error";
    case NTS_ERR_IO: return "io error";
    case NTS_ERR_BUDGET: return "node budget exceeded";
    case NTS_ERR_CAP: return "enumeration cap exceeded";
    case NTS_ERR_UNSUPPORTED: return "unsupported";
    case NTS_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* nts_last_error(void) { return g_last_error.c_str(); }

nts_status nts_tree_create(const char* generator, uint64_t budget,
                           nts_tree** out) {
  return guarded([&] {
    require(generator && out, Errc::kInvalidArgument,
            "generator and out are required");
    *out = new nts_tree{make_from_spec(
        generator, budget ? budget : Tree::kDefaultNodeBudget)};
  });
}

nts_status nts_tree_load(const char* path, nts_tree** out) {
  return guarded([&] {
    require(path && out, Errc::kInvalidArgument, "path and out are required");
    *out = new nts_tree{Tree::load(path)};
  });
}

nts_status nts_tree_save(const nts_tree* tree, const char* path) {
  return guarded([&] {
    require(tree && path, Errc::kInvalidArgument,
            "tree and path are required");
    tree->tree.save(path);
  });
}

nts_status nts_tree_render(const nts_tree* tree, char* buf, size_t cap,
                           size_t* written) {
  return guarded([&] {
    require(tree && buf, Errc::kInvalidArgument,
            "tree and buffer are required");
    std::string text = tree->tree.to_text();
    require(cap > text.size(), Errc::kInvalidArgument,
            "render buffer too small; need " + std::to_string(text.size() + 1));
    std::memcpy(buf, text.c_str(), text.size() + 1);
    if (written) *written = text.size();
  });
}

void nts_tree_free(nts_tree* tree) { delete tree; }

uint64_t nts_tree_node_count(const nts_tree* t) { return t->tree.size(); }
uint64_t nts_tree_depth(const nts_tree* t) { return t->tree.depth(); }
uint64_t nts_tree_treasure(const nts_tree* t) { return t->tree.treasure(); }
uint64_t nts_tree_treasure_depth(const nts_tree* t) {
  return t->tree.treasure_depth();
}

void nts_sim_params_init(nts_sim_params* params) {
  if (!params) return;
  params->trials = 1000;
  params->seed = 1;
  params->epsilon = 0.2;
  params->lambda = 0.75;
  params->kappa1 = 0.0;
  params->kappa2 = 0.0;
  params->step_cap = 1'000'000'000ull;
  params->threads = 0;
}

nts_status nts_simulate(const char* tree_spec, const char* model, double q,
                        const char* q_file, const char* algorithm,
                        const nts_sim_params* params, uint64_t tree_budget,
                        nts_result** out) {
  return guarded([&] {
    require(out, Errc::kInvalidArgument, "out is required");
    ExperimentSpec spec = build_spec(tree_spec, model, q, q_file, algorithm,
                                     params, tree_budget);
    *out = new nts_result{run(spec, params ? params->threads : 0)};
  });
}

int nts_result_has_metric(const nts_result* r, const char* metric) {
  if (!r || !metric) return 0;
  try {
    Metric m = parse_metric(metric);
    return (m == Metric::kMoves ? r->row.moves : r->row.queries).present;
  } catch (...) {
    return 0;
  }
}

static const MetricStats* stats_of(const nts_result* r, const char* metric) {
  Metric m = parse_metric(metric);
  return m == Metric::kMoves ? &r->row.moves : &r->row.queries;
}

double nts_result_mean(const nts_result* r, const char* metric) {
  return stats_of(r, metric)->mean;
}
double nts_result_stderr(const nts_result* r, const char* metric) {
  return stats_of(r, metric)->stderror;
}
double nts_result_median(const nts_result* r, const char* metric) {
  return stats_of(r, metric)->median;
}
double nts_result_p95(const nts_result* r, const char* metric) {
  return stats_of(r, metric)->p95;
}
double nts_result_censored_fraction(const nts_result* r) {
  return r->row.censored_fraction;
}

nts_status nts_result_render(const nts_result* r, const char* format,
                             char* buf, size_t cap, size_t* written) {
  return guarded([&] {
    require(r && format && buf, Errc::kInvalidArgument,
            "result, format and buffer are required");
    std::string f = format;
    std::string text;
    if (f == "csv")
      text = csv_row(r->row);
    else if (f == "csv_header")
      text = csv_header();
    else if (f == "jsonl")
      text = jsonl_row(r->row);
    else
      fail(Errc::kInvalidArgument, "unknown render format: " + f);
    require(cap > text.size(), Errc::kInvalidArgument,
            "render buffer too small; need " + std::to_string(text.size() + 1));
    std::memcpy(buf, text.c_str(), text.size() + 1);
    if (written) *written = text.size();
  });
}

void nts_result_free(nts_result* r) { delete r; }

nts_status nts_trace_trial(const char* tree_spec, const char* model, double q,
                           const char* algorithm,
                           const nts_sim_params* params, uint64_t trial_index,
                           nts_trace_cb cb, void* user) {
  return guarded([&] {
    require(cb, Errc::kInvalidArgument, "callback is required");
    ExperimentSpec spec =
        build_spec(tree_spec, model, q, nullptr, algorithm, params, 0);
    validate(spec);
    Tree t = make_from_spec(spec.tree, spec.budget);
    NoiseModel m =
        spec.model.text == "random"
            ? NoiseModel::uniform(t, q)
            : NoiseModel::semi_adversarial(
                  t, q,
                  spec.model.text == "semiadv:child"
                      ? adversary_to_first_child(t)
                      : adversary_to_root(t));
    std::uint64_t ts = rng::derive(spec.seed, rng::kTrialTag, trial_index);
    AdviceView adv = AdviceView::hashed(t, m, ts);
    StepSink sink = [&](const char* action, NodeId node, std::uint64_t moves,
                        std::uint64_t queries) {
      std::string line = std::string(action) + " " + std::to_string(node) +
                         " " + std::to_string(moves) + " " +
                         std::to_string(queries);
      cb(line.c_str(), user);
    };
    switch (spec.algo) {
      case AlgoId::kWalk:
        a_walk(t, adv, false, &sink);
        break;
      case AlgoId::kNatural:
        a_natural(t, adv, false, &sink);
        break;
      case AlgoId::kWalkUniformTheta:
        a_walk_uniform_theta(t, adv, false, &sink);
        break;
      case AlgoId::kPf: {
        FullDomain dom(t, adv);
        probabilistic_following(
            dom, {spec.params.lambda, spec.params.step_cap}, ts, &sink);
        break;
      }
      default:
        fail(Errc::kUnsupported,
             "tracing covers the walking and memoryless algorithms");
    }
  });
}

nts_status nts_oracle_expected_cost(const char* tree_spec, const char* model,
                                    double q, const char* algorithm,
                                    const char* metric, double lambda,
                                    uint32_t cap, char* rational_buf,
                                    size_t rational_cap, double* value) {
  return guarded([&] {
    require(tree_spec && algorithm && metric, Errc::kInvalidArgument,
            "tree, algorithm and metric are required");
    Tree t = make_from_spec(tree_spec);
    std::string mtext = model && *model ? model : "random";
    NoiseModel m =
        mtext == "random"
            ? NoiseModel::uniform(t, q)
            : NoiseModel::semi_adversarial(
                  t, q,
                  mtext == "semiadv:child" ? adversary_to_first_child(t)
                                           : adversary_to_root(t));
    AlgoParams params;
    params.lambda = lambda;
    Rational exact = exact_expected_cost(t, m, parse_algo(algorithm),
                                         parse_metric(metric), params,
                                         cap ? cap : 12);
    if (value) *value = static_cast<double>(exact);
    if (rational_buf) {
      std::string s = exact.str();
      require(rational_cap > s.size(), Errc::kInvalidArgument,
              "rational buffer too small; need " +
                  std::to_string(s.size() + 1));
      std::memcpy(rational_buf, s.c_str(), s.size() + 1);
    }
  });
}

nts_status nts_experiment_run_file(const char* config_path,
                                   const char* csv_path,
                                   const char* jsonl_path, int threads) {
  return guarded([&] {
    require(config_path, Errc::kInvalidArgument, "config path is required");
    auto rows = run_experiment_file(config_path, threads);
    if (csv_path) {
      std::ofstream out(csv_path);
      require(static_cast<bool>(out), Errc::kIo,
              std::string("cannot open ") + csv_path);
      out << csv_header() << '\n';
      for (const auto& r : rows) out << csv_row(r) << '\n';
    }
    if (jsonl_path) {
      std::ofstream out(jsonl_path);
      require(static_cast<bool>(out), Errc::kIo,
              std::string("cannot open ") + jsonl_path);
      for (const auto& r : rows) out << jsonl_row(r) << '\n';
    }
  });
}

nts_status nts_verify(const char* criterion, int threads, nts_verify_cb cb,
                      void* user, int* all_passed) {
  return guarded([&] {
    std::string which = criterion && *criterion ? criterion : "all";
    std::vector<CriterionResult> results;
    if (which == "all")
      results = run_all_criteria(threads);
    else
      results.push_back(run_criterion(which, threads));
    bool ok = true;
    for (const auto& r : results) {
      ok = ok && r.pass;
      if (cb) cb(r.id.c_str(), r.pass ? 1 : 0, r.detail.c_str(), user);
    }
    if (all_passed) *all_passed = ok ? 1 : 0;
  });
}

}  // extern "C"
