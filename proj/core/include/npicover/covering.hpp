#pragma once

#include <optional>
#include <span>
#include <vector>

#include "npicover/dynamics.hpp"
#include "npicover/npi.hpp"

namespace npicover {

// Desired per-node bound on the endemic infection probability.
struct Threshold {
  std::vector<double> x_hat;

  static Threshold uniform(NodeId n, double value) {
    return Threshold{std::vector<double>(static_cast<std::size_t>(n), value)};
  }
};

std::optional<Error> validate(const Threshold& t, NodeId n);

// J_i(S; x) = -gamma_i x_i + (1 - x_i) sum_j lambda_ij(S) x_j evaluated at
// x = x_hat, and the clipped sum J-bar(S) = sum_i max(J_i, 0).
//
// Holds its own copy of the instance. Evaluations are bit-identical to
// drift(make_system(instance, s), x_hat).
class CoverEvaluator {
 public:
  CoverEvaluator(Instance instance, Threshold threshold);

  const Instance& instance() const noexcept { return instance_; }
  const Threshold& threshold() const noexcept { return threshold_; }
  ClusterId cluster_count() const noexcept {
    return instance_.clusters.size();
  }

  double j_i(const NodeSet& covered, NodeId i) const;
  double j_i(const Strategy& s, NodeId i) const;
  std::vector<double> j_values(const Strategy& s) const;
  double j_bar(const NodeSet& covered) const;
  double j_bar(const Strategy& s) const;

  NodeSet covered(const Strategy& s) const {
    return selected_nodes(instance_.clusters, s, instance_.network.n());
  }

 private:
  Instance instance_;
  Threshold threshold_;
};

double j_i(const Instance& instance, const Strategy& s, const Threshold& t,
           NodeId i);
double j_bar(const Instance& instance, const Strategy& s, const Threshold& t);

// A strategy with every J_i <= 0 provably keeps the endemic state under
// x_hat. The check recomputes x* and throws PropositionViolation if that
// ever fails by more than kSufficiencySlack.
inline constexpr double kSufficiencySlack = 1e-9;

struct SufficiencyReport {
  bool certified = false;
  std::vector<NodeId> violators;  // nodes with J_i > 0
  SteadyState steady;
  double max_excess = 0.0;  // max_i (x*_i - x_hat_i), may be negative
};

SufficiencyReport check_sufficiency(const Instance& instance,
                                    const Strategy& s, const Threshold& t,
                                    const SolverOptions& solver = {});

struct GreedyStep {
  ClusterId cluster = 0;
  double drop = 0.0;        // J-bar before minus J-bar after
  double jbar_after = 0.0;
  double cost_after = 0.0;  // cumulative weight
};

struct GreedyResult {
  Strategy strategy;
  std::vector<GreedyStep> trace;
  double jbar_initial = 0.0;
  double jbar_final = 0.0;
  double cost = 0.0;
  // 1 + ln(J-bar(empty) / J-bar(S-hat)), S-hat = strategy before the last
  // pick. Reported as 1 with `degenerate_bound` set when S-hat is empty.
  double bound_ratio = 1.0;
  bool degenerate_bound = false;
};

// Greedy submodular cover: repeatedly add the cluster with the largest
// J-bar drop per unit weight (ties: larger drop, then lower index) until
// J-bar reaches 0. `weights` must be positive, one per cluster; c1_weights()
// gives the C1 metric.
GreedyResult greedy_cover(const CoverEvaluator& eval,
                          std::span<const double> weights);
GreedyResult greedy_cover(const Instance& instance, const Threshold& t,
                          std::span<const double> weights);

inline constexpr ClusterId kBruteForceMaxClusters = 20;

struct CoverSolution {
  Strategy strategy;
  double cost = 0.0;
};

// Minimum-weight strategy with J-bar = 0 by exhaustive enumeration.
// Ties: fewer clusters, then lexicographically smallest index list.
CoverSolution brute_force_cover(const CoverEvaluator& eval,
                                std::span<const double> weights);
CoverSolution brute_force_cover(const Instance& instance, const Threshold& t,
                                std::span<const double> weights);

// Degree heuristic: clusters in decreasing order of the summed weighted
// degree of their members (ties by index) until J-bar reaches 0.
Strategy baseline_degree(const CoverEvaluator& eval);
Strategy baseline_degree(const Instance& instance, const Threshold& t);

}  // namespace npicover
