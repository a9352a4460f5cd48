#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "npicover/network.hpp"

namespace npicover {

// Effectiveness of an NPI on an edge with one (theta1) or both (theta2)
// endpoints inside selected clusters. Default range is 0.5 < theta1 <=
// theta2 < 1; `relaxed` lowers the floor to theta1 > 0.
struct NpiParams {
  double theta1 = 0.7;
  double theta2 = 0.9;
  bool relaxed = false;
};

std::optional<Error> validate(const NpiParams& params);
void require_valid(const NpiParams& params);

// True when 2*theta1 >= theta2. Edge rates are supermodular in the strategy
// exactly in this regime; the strict default range always satisfies it.
bool supermodular_regime(const NpiParams& params);

// Set of selected cluster indices, kept sorted and duplicate-free.
class Strategy {
 public:
  Strategy() = default;
  explicit Strategy(std::vector<ClusterId> ids);

  // Clusters whose bit is set in `mask` (bit r -> cluster r).
  static Strategy from_mask(std::uint64_t mask, ClusterId cluster_count);

  bool contains(ClusterId r) const;
  void insert(ClusterId r);
  Strategy with(ClusterId r) const;

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  const std::vector<ClusterId>& ids() const noexcept { return ids_; }
  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }

  friend bool operator==(const Strategy&, const Strategy&) = default;
  friend auto operator<=>(const Strategy&, const Strategy&) = default;

 private:
  std::vector<ClusterId> ids_;
};

std::optional<Error> validate(const Strategy& s, const ClusterSet& cs);

struct CostModel {
  std::array<double, 3> alpha{1.0, 0.0, 0.0};
  double c0 = 1.0;
};

std::optional<Error> validate(const CostModel& model);

// Membership flags over nodes 0..n-1.
class NodeSet {
 public:
  explicit NodeSet(NodeId n) : member_(static_cast<std::size_t>(n), 0) {}

  bool contains(NodeId i) const { return member_[i] != 0; }
  void insert(NodeId i);
  std::size_t count() const noexcept { return count_; }
  NodeId universe() const noexcept {
    return static_cast<NodeId>(member_.size());
  }
  std::vector<NodeId> to_vector() const;

 private:
  std::vector<char> member_;
  std::size_t count_ = 0;
};

// Union of the selected clusters' members.
NodeSet selected_nodes(const ClusterSet& cs, const Strategy& s, NodeId n);

// Multiplier applied to a_ij given the endpoints' coverage.
inline double npi_factor(const NpiParams& params, bool i_covered,
                         bool j_covered) {
  if (i_covered && j_covered) return 1.0 - params.theta2;
  if (i_covered || j_covered) return 1.0 - params.theta1;
  return 1.0;
}

// beta_i * a_ij(S-bar). Throws NotAnEdge when (i, j) is not an edge.
double effective_rate(const Network& net, const NpiParams& params,
                      const NodeSet& covered, NodeId i, NodeId j);

// Directed infection rates lambda_ij on the network's adjacency pattern.
// Entry k of values() belongs to row i = owner of slot k, column
// adjacency().neighbors[k]. Not symmetric in general because of beta_i.
class RateMatrix {
 public:
  RateMatrix(std::shared_ptr<const Adjacency> pattern,
             std::vector<double> values);

  NodeId n() const noexcept {
    return static_cast<NodeId>(pattern_->offsets.size() - 1);
  }
  std::span<const NodeId> columns(NodeId i) const;
  std::span<const double> row(NodeId i) const;
  const std::vector<double>& values() const noexcept { return values_; }
  const Adjacency& pattern() const noexcept { return *pattern_; }
  const std::shared_ptr<const Adjacency>& shared_pattern() const noexcept {
    return pattern_;
  }
  std::optional<double> rate(NodeId i, NodeId j) const;
  // d_i = sum_j lambda_ij.
  double row_sum(NodeId i) const;

 private:
  std::shared_ptr<const Adjacency> pattern_;
  std::vector<double> values_;
};

RateMatrix lambda_matrix(const Network& net, const NpiParams& params,
                         const NodeSet& covered);
RateMatrix lambda_matrix(const Network& net, const NpiParams& params,
                         const ClusterSet& cs, const Strategy& s);

// Cost metrics. C1 pays every (node, selected cluster) membership; C2 pays
// each covered node the largest c2 among its selected clusters; C3 pays c0
// per covered node.
double cost_c1(const ClusterSet& cs, const Strategy& s);
double cost_c2(const ClusterSet& cs, const Strategy& s);
double cost_c3(const ClusterSet& cs, const Strategy& s, double c0);
double total_cost(const ClusterSet& cs, const Strategy& s,
                  const CostModel& model);

// c_{r,1} * |V_r| for every cluster: the modular weights behind C1.
std::vector<double> c1_weights(const ClusterSet& cs);

// Everything needed to evaluate a strategy.
struct Instance {
  Network network;
  ClusterSet clusters;
  NpiParams npi;
};

void require_valid(const Instance& instance);

}  // namespace npicover
