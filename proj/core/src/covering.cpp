#include "npicover/covering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace npicover {

namespace {

void check_weights(std::span<const double> weights, ClusterId m) {
  if (weights.size() != static_cast<std::size_t>(m)) {
    throw Error(ErrorCode::kInvalidParams,
                "need one cover weight per cluster");
  }
  for (std::size_t r = 0; r < weights.size(); ++r) {
    if (!(weights[r] > 0.0) || !std::isfinite(weights[r])) {
      throw Error(ErrorCode::kInvalidParams,
                  "cover weight of cluster " + std::to_string(r) +
                      " must be positive");
    }
  }
}

Strategy all_clusters(ClusterId m) {
  std::vector<ClusterId> ids(m);
  std::iota(ids.begin(), ids.end(), 0);
  return Strategy(std::move(ids));
}

void require_feasible(const CoverEvaluator& eval) {
  const double jbar_all = eval.j_bar(all_clusters(eval.cluster_count()));
  if (jbar_all > 0.0) {
    throw InfeasibleError("selecting every cluster leaves J-bar = " +
                              std::to_string(jbar_all),
                          jbar_all);
  }
}

}  // namespace

std::optional<Error> validate(const Threshold& t, NodeId n) {
  if (t.x_hat.size() != static_cast<std::size_t>(n)) {
    return Error(ErrorCode::kInvalidParams,
                 "threshold has " + std::to_string(t.x_hat.size()) +
                     " entries, expected " + std::to_string(n));
  }
  for (std::size_t i = 0; i < t.x_hat.size(); ++i) {
    if (!(t.x_hat[i] > 0.0 && t.x_hat[i] <= 1.0)) {
      return Error(ErrorCode::kInvalidParams,
                   "x_hat[" + std::to_string(i) + "] outside (0,1]");
    }
  }
  return std::nullopt;
}

CoverEvaluator::CoverEvaluator(Instance instance, Threshold threshold)
    : instance_(std::move(instance)), threshold_(std::move(threshold)) {
  require_valid(instance_);
  if (auto err = validate(threshold_, instance_.network.n())) throw *err;
}

double CoverEvaluator::j_i(const NodeSet& covered, NodeId i) const {
  const Network& net = instance_.network;
  const auto& x = threshold_.x_hat;
  const auto cols = net.neighbors(i);
  const auto w = net.weights(i);
  const bool in_i = covered.contains(i);
  const double beta = net.beta()[i];
  double s = 0.0;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const double lambda =
        beta * w[k] * npi_factor(instance_.npi, in_i, covered.contains(cols[k]));
    s += lambda * x[cols[k]];
  }
  return -net.gamma()[i] * x[i] + (1.0 - x[i]) * s;
}

double CoverEvaluator::j_i(const Strategy& s, NodeId i) const {
  return j_i(covered(s), i);
}

std::vector<double> CoverEvaluator::j_values(const Strategy& s) const {
  const NodeSet cov = covered(s);
  std::vector<double> out(instance_.network.n());
  for (NodeId i = 0; i < instance_.network.n(); ++i) out[i] = j_i(cov, i);
  return out;
}

double CoverEvaluator::j_bar(const NodeSet& covered) const {
  double total = 0.0;
  for (NodeId i = 0; i < instance_.network.n(); ++i) {
    total += std::max(j_i(covered, i), 0.0);
  }
  return total;
}

double CoverEvaluator::j_bar(const Strategy& s) const {
  return j_bar(covered(s));
}

double j_i(const Instance& instance, const Strategy& s, const Threshold& t,
           NodeId i) {
  return CoverEvaluator(instance, t).j_i(s, i);
}

double j_bar(const Instance& instance, const Strategy& s, const Threshold& t) {
  return CoverEvaluator(instance, t).j_bar(s);
}

SufficiencyReport check_sufficiency(const Instance& instance,
                                    const Strategy& s, const Threshold& t,
                                    const SolverOptions& solver) {
  const CoverEvaluator eval(instance, t);
  SufficiencyReport report;
  const auto j = eval.j_values(s);
  for (NodeId i = 0; i < static_cast<NodeId>(j.size()); ++i) {
    if (j[i] > 0.0) report.violators.push_back(i);
  }
  report.certified = report.violators.empty();
  report.steady = endemic_fixed_point(make_system(instance, s), solver);
  report.max_excess = -INFINITY;
  for (std::size_t i = 0; i < j.size(); ++i) {
    report.max_excess =
        std::max(report.max_excess, report.steady.x_star[i] - t.x_hat[i]);
  }
  if (report.certified && report.max_excess > kSufficiencySlack) {
    throw Error(ErrorCode::kPropositionViolation,
                "certified strategy has endemic state above the threshold by " +
                    std::to_string(report.max_excess));
  }
  return report;
}

GreedyResult greedy_cover(const CoverEvaluator& eval,
                          std::span<const double> weights) {
  const ClusterId m = eval.cluster_count();
  check_weights(weights, m);
  require_feasible(eval);

  GreedyResult result;
  double current = eval.j_bar(result.strategy);
  result.jbar_initial = current;
  while (current > 0.0) {
    ClusterId best = -1;
    double best_ratio = 0.0;
    double best_drop = 0.0;
    double best_after = 0.0;
    for (ClusterId r = 0; r < m; ++r) {
      if (result.strategy.contains(r)) continue;
      const double after = eval.j_bar(result.strategy.with(r));
      const double drop = current - after;
      if (!(drop > 0.0)) continue;
      const double ratio = drop / weights[r];
      if (best < 0 || ratio > best_ratio ||
          (ratio == best_ratio && drop > best_drop)) {
        best = r;
        best_ratio = ratio;
        best_drop = drop;
        best_after = after;
      }
    }
    if (best < 0) {
      throw Error(ErrorCode::kZeroGainStall,
                  "no remaining cluster lowers J-bar = " +
                      std::to_string(current));
    }
    result.strategy.insert(best);
    result.cost += weights[best];
    result.trace.push_back({best, best_drop, best_after, result.cost});
    current = best_after;
  }
  result.jbar_final = current;
  if (result.trace.size() >= 2) {
    const double jbar_hat = result.trace[result.trace.size() - 2].jbar_after;
    result.bound_ratio = 1.0 + std::log(result.jbar_initial / jbar_hat);
  } else {
    result.bound_ratio = 1.0;
    result.degenerate_bound = true;
  }
  return result;
}

GreedyResult greedy_cover(const Instance& instance, const Threshold& t,
                          std::span<const double> weights) {
  return greedy_cover(CoverEvaluator(instance, t), weights);
}

CoverSolution brute_force_cover(const CoverEvaluator& eval,
                                std::span<const double> weights) {
  const ClusterId m = eval.cluster_count();
  if (m > kBruteForceMaxClusters) {
    throw Error(ErrorCode::kTooManyClusters,
                std::to_string(m) + " clusters exceed the brute-force cap of " +
                    std::to_string(kBruteForceMaxClusters));
  }
  check_weights(weights, m);
  require_feasible(eval);

  std::optional<CoverSolution> best;
  const std::uint64_t subsets = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    Strategy s = Strategy::from_mask(mask, m);
    double cost = 0.0;
    for (ClusterId r : s) cost += weights[r];
    if (best) {
      if (cost > best->cost) continue;
      if (cost == best->cost) {
        if (s.size() > best->strategy.size()) continue;
        if (s.size() == best->strategy.size() &&
            !(s.ids() < best->strategy.ids())) {
          continue;
        }
      }
    }
    if (eval.j_bar(s) == 0.0) best = CoverSolution{std::move(s), cost};
  }
  // Feasibility was checked above, so the full set at least qualifies.
  return *best;
}

CoverSolution brute_force_cover(const Instance& instance, const Threshold& t,
                                std::span<const double> weights) {
  return brute_force_cover(CoverEvaluator(instance, t), weights);
}

Strategy baseline_degree(const CoverEvaluator& eval) {
  require_feasible(eval);
  const Instance& inst = eval.instance();
  const ClusterId m = eval.cluster_count();
  std::vector<double> score(m, 0.0);
  for (ClusterId r = 0; r < m; ++r) {
    for (NodeId i : inst.clusters[r]) {
      score[r] += inst.network.weighted_degree(i);
    }
  }
  std::vector<ClusterId> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](ClusterId a, ClusterId b) {
    return score[a] > score[b];
  });
  Strategy s;
  for (ClusterId r : order) {
    if (eval.j_bar(s) == 0.0) break;
    s.insert(r);
  }
  return s;
}

Strategy baseline_degree(const Instance& instance, const Threshold& t) {
  return baseline_degree(CoverEvaluator(instance, t));
}

}  // namespace npicover
