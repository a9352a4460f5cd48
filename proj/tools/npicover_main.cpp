// npicover: generate instances, simulate, optimize NPI cluster selections,
// sweep thresholds and run the property battery.
//
// Exit codes: 0 ok, 1 internal error, 2 usage/config/input error,
// 3 infeasible, 4 solver non-convergence, 5 property violation.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "npicover/covering.hpp"
#include "npicover/experiment.hpp"
#include "npicover/io.hpp"
#include "npicover/properties.hpp"

namespace fs = std::filesystem;
using namespace npicover;

namespace {

enum Exit : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kInfeasibleExit = 3,
  kNoConvergenceExit = 4,
  kViolationExit = 5,
};

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> threshold;
  std::optional<double> dt;
  int jobs = 1;
  bool baseline = false;
  bool brute_force = false;
  bool quick = false;
  std::string network_path;
  std::string clusters_path;
  std::string strategy_path;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kIo:
    case ErrorCode::kInvalidParams:
    case ErrorCode::kInvalidNode:
    case ErrorCode::kNotConnected:
    case ErrorCode::kNonPositiveRate:
    case ErrorCode::kNonPositiveWeight:
    case ErrorCode::kAsymmetricWeight:
    case ErrorCode::kDuplicateEdge:
    case ErrorCode::kSelfLoop:
    case ErrorCode::kTooManyClusters:
    case ErrorCode::kInvalidInitialState:
      return kUsage;
    case ErrorCode::kInfeasible:
    case ErrorCode::kInfeasibleAfterRetries:
      return kInfeasibleExit;
    case ErrorCode::kNoConvergence:
    case ErrorCode::kNonFiniteState:
    case ErrorCode::kThresholdNotMet:
      return kNoConvergenceExit;
    case ErrorCode::kPropositionViolation:
    case ErrorCode::kZeroGainStall:
      return kViolationExit;
    case ErrorCode::kNotAnEdge:
      return kInternal;
  }
  return kInternal;
}

ExperimentConfig load_config(const Options& o) {
  if (o.config_path.empty()) {
    throw Error(ErrorCode::kConfig, "--config <path> is required");
  }
  if (!fs::exists(o.config_path)) {
    throw Error(ErrorCode::kConfig, "config file not found: " + o.config_path);
  }
  ExperimentConfig c = io::config_from_json(io::read_file(o.config_path));
  if (o.dt) c.dynamics.dt = *o.dt;
  if (auto err = validate(c)) throw *err;
  return c;
}

std::uint64_t seed_of(const Options& o, const ExperimentConfig& c) {
  return o.seed ? *o.seed : c.seeds.front();
}

double threshold_of(const Options& o, const ExperimentConfig& c) {
  const double t = o.threshold ? *o.threshold : c.thresholds.front();
  if (!(t > 0.0 && t < 1.0)) {
    throw Error(ErrorCode::kConfig, "--threshold must lie in (0,1)");
  }
  return t;
}

// Instance from --network/--clusters files, or drawn from the config.
BuiltInstance load_instance(const Options& o, const ExperimentConfig& c) {
  if (o.network_path.empty() != o.clusters_path.empty()) {
    throw Error(ErrorCode::kConfig, "--network and --clusters go together");
  }
  if (!o.network_path.empty()) {
    Network net = io::network_from_json(io::read_file(o.network_path));
    ClusterSet cs = io::clusters_from_json(io::read_file(o.clusters_path), net.n());
    return BuiltInstance{Instance{std::move(net), std::move(cs), c.npi}, 0};
  }
  return build_instance(c, seed_of(o, c));
}

int run_generate(const Options& o) {
  const ExperimentConfig c = load_config(o);
  const std::uint64_t seed = seed_of(o, c);
  const BuiltInstance built = build_instance(c, seed);
  const Instance& inst = built.instance;
  const fs::path out(o.out_dir);
  io::write_file(out / "network.json", io::network_to_json(inst.network));
  io::write_file(out / "clusters.json", io::clusters_to_json(inst.clusters));
  std::printf("seed %llu: %d nodes, %zu edges, %d clusters (%d regenerations)\n",
              static_cast<unsigned long long>(seed), inst.network.n(),
              inst.network.edge_count(), inst.clusters.size(), built.regen);
  std::vector<ClusterId> every(inst.clusters.size());
  for (ClusterId r = 0; r < inst.clusters.size(); ++r) every[r] = r;
  for (double t : c.thresholds) {
    const double jbar =
        j_bar(inst, Strategy(every), Threshold::uniform(inst.network.n(), t));
    std::printf("  threshold %-6s %s\n", io::format_double(t).c_str(),
                jbar == 0.0 ? "ok" : ("infeasible (J-bar = " +
                                      io::format_double(jbar) + ")").c_str());
  }
  std::printf("wrote %s, %s\n", (out / "network.json").c_str(),
              (out / "clusters.json").c_str());
  return kOk;
}

int run_optimize(const Options& o) {
  const ExperimentConfig c = load_config(o);
  const BuiltInstance built = load_instance(o, c);
  const Instance& inst = built.instance;
  const double t = threshold_of(o, c);
  const CoverEvaluator eval(inst, Threshold::uniform(inst.network.n(), t));
  const auto weights = c1_weights(inst.clusters);
  const fs::path out(o.out_dir);

  const auto describe = [&](const char* label, const Strategy& s) {
    std::printf("%s: %zu clusters, %zu nodes, cost %s, J-bar %s\n", label,
                s.size(), selected_nodes(inst.clusters, s, inst.network.n()).count(),
                io::format_double(total_cost(inst.clusters, s, c.cost)).c_str(),
                io::format_double(eval.j_bar(s)).c_str());
    std::printf("  selected:");
    for (ClusterId r : s) std::printf(" %d", r);
    std::printf("\n");
  };

  if (o.baseline) {
    const Strategy s = baseline_degree(eval);
    io::write_file(out / "strategy.json", io::strategy_to_json(s));
    describe("baseline", s);
    return kOk;
  }
  const GreedyResult g = greedy_cover(eval, weights);
  io::write_file(out / "strategy.json", io::greedy_result_to_json(g));
  describe("greedy", g.strategy);
  std::printf("  bound_ratio %s%s\n", io::format_double(g.bound_ratio).c_str(),
              g.degenerate_bound ? " (degenerate: single step)" : "");
  if (o.brute_force) {
    if (inst.clusters.size() > 12) {
      throw Error(ErrorCode::kTooManyClusters,
                  "--brute-force is limited to 12 clusters");
    }
    const CoverSolution opt = brute_force_cover(eval, weights);
    io::write_file(out / "optimal.json", io::strategy_to_json(opt.strategy));
    describe("optimal", opt.strategy);
    std::printf("  greedy/optimal C1 ratio %s (certificate %s)\n",
                io::format_double(g.cost / opt.cost).c_str(),
                io::format_double(g.bound_ratio).c_str());
  }
  return kOk;
}

int run_simulate(const Options& o) {
  const ExperimentConfig c = load_config(o);
  const BuiltInstance built = load_instance(o, c);
  const double t = threshold_of(o, c);
  std::optional<Strategy> strategy;
  if (!o.strategy_path.empty()) {
    strategy = io::strategy_from_json(io::read_file(o.strategy_path));
  }
  const ComparisonBundle b =
      run_comparison(c, seed_of(o, c), t, strategy, built.instance);
  const fs::path out(o.out_dir);
  io::write_file(out / "traj_free.csv", io::trajectory_to_csv(b.free_run));
  io::write_file(out / "traj_npi.csv", io::trajectory_to_csv(b.npi_run));
  io::write_file(out / "steady.json", io::comparison_steady_json(b));
  const auto range = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return "[" + io::format_double(*lo) + ", " + io::format_double(*hi) + "]";
  };
  std::printf("threshold %s, strategy with %zu clusters (%s)\n",
              io::format_double(t).c_str(), b.strategy.size(),
              b.certified ? "certified" : "not certified");
  std::printf("  without NPI: terminal %s, R0 %s\n",
              range(b.free_run.states.back()).c_str(),
              io::format_double(b.steady_free.r0).c_str());
  std::printf("  with NPI:    terminal %s, R0 %s\n",
              range(b.npi_run.states.back()).c_str(),
              io::format_double(b.steady_npi.r0).c_str());
  std::printf("wrote traj_free.csv, traj_npi.csv, steady.json to %s\n",
              out.c_str());
  return kOk;
}

int run_sweep(const Options& o) {
  ExperimentConfig c = load_config(o);
  if (o.seed) c.seeds = {*o.seed};
  if (o.threshold) c.thresholds = {threshold_of(o, c)};
  if (o.jobs < 1) throw Error(ErrorCode::kConfig, "--jobs must be >= 1");
  const SweepReport report = sweep(c, o.jobs);
  const fs::path out(o.out_dir);
  io::write_file(out / "sweep.csv", io::sweep_to_csv(report));
  io::write_file(out / "sweep.json", io::sweep_summary_json(report));
  std::printf("%-9s %-6s %-8s %8s %6s %8s\n", "threshold", "seed", "method",
              "clusters", "nodes", "cost");
  for (const SweepRow& r : report.rows) {
    std::printf("%-9s %-6llu %-8s %8zu %6zu %8s\n",
                io::format_double(r.threshold).c_str(),
                static_cast<unsigned long long>(r.seed),
                std::string(to_string(r.method)).c_str(), r.clusters, r.nodes,
                io::format_double(r.cost).c_str());
  }
  std::printf("mean greedy/baseline cost ratio %.4f; greedy never worse: %s\n",
              report.mean_cost_ratio(), report.greedy_never_worse() ? "yes" : "no");
  std::printf("wrote %s\n", (out / "sweep.csv").c_str());
  return kOk;
}

int run_verify(const Options& o) {
  properties::VerifyOptions v;
  v.quick = o.quick;
  if (o.seed) v.seed = *o.seed;
  const auto results = properties::run_verification(v);
  bool ok = true;
  std::printf("%-48s %6s %10s %10s %12s %8s\n", "property", "status", "checks",
              "violations", "max excess", "seconds");
  for (const auto& r : results) {
    ok = ok && r.passed();
    std::printf("%-48s %6s %10ld %10ld %12.3g %8.2f\n", r.name.c_str(),
                r.passed() ? "PASS" : "FAIL", r.checks, r.violations,
                r.max_violation, r.seconds);
  }
  std::printf("%s\n", ok ? "all properties hold" : "property violations found");
  return ok ? kOk : kViolationExit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-cost NPI cluster selection for networked SIS epidemics"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&o](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", o.config_path, "Experiment config (JSON)");
    if (needs_config) opt->required();
    sub->add_option("--out", o.out_dir, "Output directory");
    sub->add_option("--seed", o.seed, "Override the instance seed");
    sub->add_option("--threshold", o.threshold, "Override the uniform threshold x_hat");
    sub->add_option("--dt", o.dt, "Override the RK4 step");
    sub->add_option("--jobs", o.jobs, "Worker threads");
  };
  const auto instance_files = [&o](CLI::App* sub) {
    sub->add_option("--network", o.network_path, "Load network.json instead of generating");
    sub->add_option("--clusters", o.clusters_path, "Load clusters.json instead of generating");
  };

  auto* generate = app.add_subcommand("generate", "Draw a feasible instance");
  common(generate, true);
  auto* simulate = app.add_subcommand("simulate", "Trajectories with and without NPIs");
  common(simulate, true);
  instance_files(simulate);
  simulate->add_option("--strategy", o.strategy_path, "Strategy JSON (default: greedy)");
  auto* optimize = app.add_subcommand("optimize", "Greedy minimum-cost cover");
  common(optimize, true);
  instance_files(optimize);
  optimize->add_flag("--baseline", o.baseline, "Use the degree heuristic instead");
  optimize->add_flag("--brute-force", o.brute_force, "Also enumerate the optimum (<= 12 clusters)");
  auto* sweep_cmd = app.add_subcommand("sweep", "Greedy vs baseline over thresholds and seeds");
  common(sweep_cmd, true);
  auto* verify = app.add_subcommand("verify", "Run the property battery");
  common(verify, false);
  verify->add_flag("--quick", o.quick, "Reduced instance counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*generate) return run_generate(o);
    if (*simulate) return run_simulate(o);
    if (*optimize) return run_optimize(o);
    if (*sweep_cmd) return run_sweep(o);
    if (*verify) return run_verify(o);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kInternal;
  }
  return kInternal;
}
