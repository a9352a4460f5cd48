#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "npicover/error.hpp"

namespace npicover {

using NodeId = std::int32_t;
using ClusterId = std::int32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Compressed sparse rows over the undirected edge set; every edge appears
// once in each endpoint's row. Rows are sorted by neighbor id.
struct Adjacency {
  std::vector<std::size_t> offsets;  // size n + 1
  std::vector<NodeId> neighbors;
  std::vector<double> weights;
};

// Undirected weighted contact network with per-node curing rates (gamma)
// and infection rates (beta).
//
// Construction normalizes every edge to u <= v and sorts the list, but does
// not reject bad input: call validate() or require_valid(). Generators in
// this library always produce valid networks.
class Network {
 public:
  Network() = default;
  Network(NodeId n, std::vector<Edge> edges, std::vector<double> gamma,
          std::vector<double> beta);

  NodeId n() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<double>& gamma() const noexcept { return gamma_; }
  const std::vector<double>& beta() const noexcept { return beta_; }

  std::span<const NodeId> neighbors(NodeId i) const;
  std::span<const double> weights(NodeId i) const;
  std::size_t row_begin(NodeId i) const { return adjacency_->offsets[i]; }
  std::size_t degree(NodeId i) const;
  // Sum of incident edge weights.
  double weighted_degree(NodeId i) const;
  std::optional<double> weight(NodeId i, NodeId j) const;

  const std::shared_ptr<const Adjacency>& adjacency() const noexcept {
    return adjacency_;
  }

  friend bool operator==(const Network& a, const Network& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_ && a.gamma_ == b.gamma_ &&
           a.beta_ == b.beta_;
  }

 private:
  NodeId n_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> gamma_;
  std::vector<double> beta_;
  std::shared_ptr<const Adjacency> adjacency_ = std::make_shared<Adjacency>();
};

// Returns the first violated invariant, or nullopt when the network is a
// connected simple graph with positive weights and rates.
std::optional<Error> validate(const Network& net);
void require_valid(const Network& net);

// Breadth-first search from node 0; nullopt when every node is reached.
std::optional<NodeId> first_unreachable(
    NodeId n, std::span<const std::pair<NodeId, NodeId>> edges);

// Possibly overlapping node groups. Member lists are kept sorted and unique.
struct ClusterSet {
  std::vector<std::vector<NodeId>> members;
  std::vector<double> cost_c1;
  std::vector<double> cost_c2;

  ClusterSet() = default;
  ClusterSet(std::vector<std::vector<NodeId>> members,
             std::vector<double> cost_c1, std::vector<double> cost_c2);

  ClusterId size() const noexcept {
    return static_cast<ClusterId>(members.size());
  }
  const std::vector<NodeId>& operator[](ClusterId r) const {
    return members[r];
  }

  friend bool operator==(const ClusterSet&, const ClusterSet&) = default;
};

std::optional<Error> validate(const ClusterSet& cs, NodeId n);
void require_valid(const ClusterSet& cs, NodeId n);

// Network structure without weights or rates.
struct Topology {
  NodeId n = 0;
  std::vector<std::pair<NodeId, NodeId>> edges;  // u < v, sorted
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// Ring lattice of even degree k with each lattice edge rewired with
// probability p. Disconnected outcomes are redrawn from derived sub-seeds.
Topology watts_strogatz(NodeId n, int k, double p, std::uint64_t seed);

// Uniform gamma, beta per node and weights per edge (in edge-list order).
Network random_parameters(const Topology& topology, Range gamma_range,
                          Range beta_range, Range weight_range,
                          std::uint64_t seed);

// count clusters; cluster size uniform on [size_range.first,
// size_range.second]; members a uniform random subset; both cost
// coefficients drawn uniformly from cost_choices.
ClusterSet random_clusters(const Network& net, ClusterId count,
                           std::pair<NodeId, NodeId> size_range,
                           std::span<const double> cost_choices,
                           std::uint64_t seed);

}  // namespace npicover
