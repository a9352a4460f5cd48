#include "npicover/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "npicover/rng.hpp"

namespace npicover {

std::optional<Error> validate(const ExperimentConfig& c) {
  const auto bad = [](const std::string& what) {
    return Error(ErrorCode::kConfig, what);
  };
  if (c.thresholds.empty()) return bad("thresholds must be nonempty");
  for (double t : c.thresholds) {
    if (!(t > 0.0 && t < 1.0)) return bad("thresholds must lie in (0,1)");
  }
  if (c.seeds.empty()) return bad("seeds must be nonempty");
  if (c.max_regen < 1) return bad("max_regen must be >= 1");
  if (c.network.k < 2 || c.network.k % 2 != 0 || c.network.n <= c.network.k) {
    return bad("network needs n > k >= 2 with k even");
  }
  if (!(c.network.p >= 0.0 && c.network.p <= 1.0)) {
    return bad("network.p must lie in [0,1]");
  }
  for (const Range* r : {&c.network.gamma, &c.network.beta, &c.network.weight}) {
    if (!(r->lo > 0.0 && r->hi >= r->lo)) {
      return bad("rate and weight ranges need 0 < lo <= hi");
    }
  }
  const auto [lo, hi] = c.clusters.size_range;
  if (c.clusters.count < 1 || lo < 1 || lo > hi || hi > c.network.n) {
    return bad("clusters need count >= 1 and 1 <= min size <= max size <= n");
  }
  if (c.clusters.cost_choices.empty()) return bad("cost_choices is empty");
  for (double v : c.clusters.cost_choices) {
    if (!(v > 0.0)) return bad("cost_choices must be positive");
  }
  if (auto err = validate(c.npi)) return bad(err->what());
  if (auto err = validate(c.cost)) return bad(err->what());
  const auto& d = c.dynamics;
  if (!(d.dt > 0.0) || !(d.t_end > 0.0) || !(d.tol > 0.0) || d.max_iter < 1 ||
      d.sample_stride < 1) {
    return bad("dynamics settings must be positive");
  }
  return std::nullopt;
}

Instance draw_instance(const ExperimentConfig& config, std::uint64_t seed,
                       int attempt) {
  const std::uint64_t s = derive_seed(seed, Stream::kInstance, attempt);
  const auto& ns = config.network;
  Network net = random_parameters(watts_strogatz(ns.n, ns.k, ns.p, s),
                                  ns.gamma, ns.beta, ns.weight, s);
  ClusterSet cs = random_clusters(net, config.clusters.count,
                                  config.clusters.size_range,
                                  config.clusters.cost_choices, s);
  return Instance{std::move(net), std::move(cs), config.npi};
}

BuiltInstance build_instance(const ExperimentConfig& config,
                             std::uint64_t seed) {
  if (auto err = validate(config)) throw *err;
  const double tightest =
      *std::min_element(config.thresholds.begin(), config.thresholds.end());
  std::vector<ClusterId> every(config.clusters.count);
  std::iota(every.begin(), every.end(), 0);
  const Strategy all(std::move(every));
  double last_jbar = 0.0;
  for (int attempt = 0; attempt <= config.max_regen; ++attempt) {
    Instance inst = draw_instance(config, seed, attempt);
    const CoverEvaluator eval(
        inst, Threshold::uniform(inst.network.n(), tightest));
    last_jbar = eval.j_bar(all);
    if (last_jbar == 0.0) return BuiltInstance{std::move(inst), attempt};
  }
  throw Error(ErrorCode::kInfeasibleAfterRetries,
              "seed " + std::to_string(seed) + ": no feasible instance for " +
                  "threshold " + std::to_string(tightest) + " after " +
                  std::to_string(config.max_regen) +
                  " regenerations (last J-bar = " + std::to_string(last_jbar) +
                  ")");
}

std::vector<double> random_initial_state(NodeId n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, Stream::kInitialState));
  std::vector<double> x(n);
  do {
    for (double& v : x) v = rng.uniform01();
  } while (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; }));
  return x;
}

ComparisonBundle run_comparison(const ExperimentConfig& config,
                                std::uint64_t seed, double threshold,
                                const std::optional<Strategy>& strategy,
                                const std::optional<Instance>& instance,
                                const std::optional<std::vector<double>>& x0) {
  ComparisonBundle out;
  if (instance) {
    require_valid(*instance);
    out.instance = *instance;
  } else {
    BuiltInstance built = build_instance(config, seed);
    out.instance = std::move(built.instance);
    out.regen = built.regen;
  }
  out.threshold = threshold;
  const NodeId n = out.instance.network.n();
  const CoverEvaluator eval(out.instance, Threshold::uniform(n, threshold));
  if (strategy) {
    if (auto err = validate(*strategy, out.instance.clusters)) throw *err;
    out.strategy = *strategy;
  } else {
    out.greedy = greedy_cover(eval, c1_weights(out.instance.clusters));
    out.strategy = out.greedy->strategy;
  }
  out.certified = eval.j_bar(out.strategy) == 0.0;
  out.x0 = x0 ? *x0 : random_initial_state(n, seed);
  out.degenerate =
      std::all_of(out.x0.begin(), out.x0.end(), [](double v) { return v == 0.0; });

  const auto opts = config.dynamics.integrate_options();
  const SisSystem free_sys = make_system(out.instance, Strategy{});
  const SisSystem npi_sys = make_system(out.instance, out.strategy);
  out.free_run = integrate(free_sys, out.x0, opts);
  out.npi_run = integrate(npi_sys, out.x0, opts);
  out.steady_free = endemic_fixed_point(free_sys, config.dynamics.solver_options());
  out.steady_npi = endemic_fixed_point(npi_sys, config.dynamics.solver_options());

  const auto& terminal = out.npi_run.states.back();
  out.terminal_max_npi = *std::max_element(terminal.begin(), terminal.end());
  if (out.certified && !out.degenerate &&
      out.terminal_max_npi > threshold + kTerminalSlack) {
    throw Error(ErrorCode::kPropositionViolation,
                "controlled trajectory ends at " +
                    std::to_string(out.terminal_max_npi) +
                    ", above threshold " + std::to_string(threshold));
  }
  return out;
}

std::string_view to_string(Method m) {
  return m == Method::kGreedy ? "greedy" : "baseline";
}

std::vector<double> SweepReport::cost_ratios() const {
  std::vector<double> ratios;
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    const SweepRow& g = rows[k];
    const SweepRow& b = rows[k + 1];
    if (g.method == Method::kGreedy && b.method == Method::kBaseline &&
        g.threshold == b.threshold && g.seed == b.seed) {
      ratios.push_back(g.cost / b.cost);
    }
  }
  return ratios;
}

double SweepReport::mean_cost_ratio() const {
  const auto r = cost_ratios();
  if (r.empty()) return 0.0;
  return std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
}

bool SweepReport::greedy_never_worse() const {
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    const SweepRow& g = rows[k];
    const SweepRow& b = rows[k + 1];
    if (g.method == Method::kGreedy && b.method == Method::kBaseline &&
        g.cost > b.cost) {
      return false;
    }
  }
  return true;
}

namespace {

SweepRow make_row(const Instance& inst, const CoverEvaluator& eval,
                  const ExperimentConfig& config, double threshold,
                  std::uint64_t seed, int regen, Method method,
                  const Strategy& s) {
  SweepRow row;
  row.threshold = threshold;
  row.seed = seed;
  row.method = method;
  row.strategy = s;
  row.clusters = s.size();
  row.nodes = selected_nodes(inst.clusters, s, inst.network.n()).count();
  row.cost = total_cost(inst.clusters, s, config.cost);
  row.regen = regen;
  row.jbar = eval.j_bar(s);
  const auto report = check_sufficiency(inst, s, eval.threshold(),
                                        config.dynamics.solver_options());
  row.max_excess = report.max_excess;
  return row;
}

std::vector<SweepRow> sweep_seed(const ExperimentConfig& config,
                                 std::uint64_t seed) {
  const BuiltInstance built = build_instance(config, seed);
  const Instance& inst = built.instance;
  const auto weights = c1_weights(inst.clusters);
  std::vector<SweepRow> rows;
  for (double t : config.thresholds) {
    const CoverEvaluator eval(inst, Threshold::uniform(inst.network.n(), t));
    const GreedyResult g = greedy_cover(eval, weights);
    SweepRow gr = make_row(inst, eval, config, t, seed, built.regen,
                           Method::kGreedy, g.strategy);
    gr.bound_ratio = g.bound_ratio;
    rows.push_back(std::move(gr));
    rows.push_back(make_row(inst, eval, config, t, seed, built.regen,
                            Method::kBaseline, baseline_degree(eval)));
  }
  return rows;
}

}  // namespace

SweepReport sweep(const ExperimentConfig& config, int jobs) {
  if (auto err = validate(config)) throw *err;
  const std::size_t cells = config.seeds.size();
  std::vector<std::vector<SweepRow>> results(cells);
  std::vector<std::exception_ptr> errors(cells);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < cells; k = next++) {
      try {
        results[k] = sweep_seed(config, config.seeds[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int workers =
      std::max(1, std::min(jobs, static_cast<int>(cells)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SweepReport report;
  for (auto& r : results) {
    for (auto& row : r) report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     if (a.threshold != b.threshold) return a.threshold < b.threshold;
                     if (a.seed != b.seed) return a.seed < b.seed;
                     return a.method < b.method;
                   });
  return report;
}

}  // namespace npicover
