#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "npicover/covering.hpp"
#include "npicover/dynamics.hpp"
#include "npicover/network.hpp"
#include "npicover/npi.hpp"

namespace npicover {

struct NetworkSpec {
  NodeId n = 100;
  int k = 4;
  double p = 0.2;
  Range gamma{0.4, 0.5};
  Range beta{0.4, 0.6};
  Range weight{0.4, 0.5};
};

struct ClusterSpec {
  ClusterId count = 25;
  std::pair<NodeId, NodeId> size_range{10, 15};
  std::vector<double> cost_choices{1.0, 2.0, 3.0, 4.0};
};

struct DynamicsSpec {
  double dt = 0.01;
  double t_end = 200.0;
  double tol = 1e-10;
  long max_iter = 100'000;
  long sample_stride = 100;

  IntegrateOptions integrate_options() const {
    return IntegrateOptions{dt, t_end, sample_stride};
  }
  SolverOptions solver_options() const { return SolverOptions{tol, max_iter}; }
};

// Defaults reproduce the threshold-sweep setup: 100-node small world with
// 200 edges, 25 random clusters of 10-15 nodes, integer costs 1-4.
struct ExperimentConfig {
  NetworkSpec network;
  ClusterSpec clusters;
  NpiParams npi;
  CostModel cost;
  std::vector<double> thresholds{0.05, 0.2, 0.3, 0.4};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  DynamicsSpec dynamics;
  int max_regen = 50;
};

std::optional<Error> validate(const ExperimentConfig& config);

struct BuiltInstance {
  Instance instance;
  int regen = 0;  // number of discarded infeasible draws
};

// Draws network and clusters for `seed`. A draw is kept when selecting every
// cluster meets the smallest configured threshold; otherwise it is redrawn
// from the next derived sub-seed, at most max_regen times.
BuiltInstance build_instance(const ExperimentConfig& config,
                             std::uint64_t seed);

// Draw for a single attempt, without the feasibility filter.
Instance draw_instance(const ExperimentConfig& config, std::uint64_t seed,
                       int attempt);

// Uniform on [0,1]^n, never the zero vector.
std::vector<double> random_initial_state(NodeId n, std::uint64_t seed);

struct ComparisonBundle {
  Instance instance;
  int regen = 0;
  double threshold = 0.0;
  Strategy strategy;
  std::optional<GreedyResult> greedy;  // set when the strategy came from greedy
  std::vector<double> x0;
  Trajectory free_run;
  Trajectory npi_run;
  SteadyState steady_free;
  SteadyState steady_npi;
  bool certified = false;
  bool degenerate = false;  // x0 == 0, both runs trivially zero
  double terminal_max_npi = 0.0;
};

// Uncontrolled vs controlled trajectories from the same x0. Without an
// explicit strategy the greedy C1 cover is used. A certified strategy whose
// terminal state exceeds threshold + 1e-3 raises PropositionViolation.
ComparisonBundle run_comparison(
    const ExperimentConfig& config, std::uint64_t seed, double threshold,
    const std::optional<Strategy>& strategy = std::nullopt,
    const std::optional<Instance>& instance = std::nullopt,
    const std::optional<std::vector<double>>& x0 = std::nullopt);

inline constexpr double kTerminalSlack = 1e-3;

enum class Method { kGreedy, kBaseline };

std::string_view to_string(Method m);

struct SweepRow {
  double threshold = 0.0;
  std::uint64_t seed = 0;
  Method method = Method::kGreedy;
  std::size_t clusters = 0;
  std::size_t nodes = 0;
  double cost = 0.0;
  std::optional<double> bound_ratio;
  int regen = 0;
  double jbar = 0.0;
  double max_excess = 0.0;  // max_i x*_i - x_hat_i
  Strategy strategy;
};

struct SweepReport {
  std::vector<SweepRow> rows;  // sorted by (threshold, seed, method)

  // Greedy cost / baseline cost for every (threshold, seed) cell.
  std::vector<double> cost_ratios() const;
  double mean_cost_ratio() const;
  bool greedy_never_worse() const;
};

// Every (threshold, seed) cell, `jobs` worker threads. The report does not
// depend on `jobs`.
SweepReport sweep(const ExperimentConfig& config, int jobs = 1);

}  // namespace npicover
