#include "npicover/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace npicover {

namespace {

std::string edge_name(const Edge& e) {
  return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
}

}  // namespace

Network::Network(NodeId n, std::vector<Edge> edges, std::vector<double> gamma,
                 std::vector<double> beta)
    : n_(n),
      edges_(std::move(edges)),
      gamma_(std::move(gamma)),
      beta_(std::move(beta)) {
  for (Edge& e : edges_) {
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::stable_sort(edges_.begin(), edges_.end(),
                   [](const Edge& a, const Edge& b) {
                     return std::pair(a.u, a.v) < std::pair(b.u, b.v);
                   });

  // Self-loops and out-of-range endpoints stay in edges_ for validate() to
  // report, but never reach the adjacency rows.
  const std::size_t rows = n > 0 ? static_cast<std::size_t>(n) : 0;
  std::vector<std::vector<std::pair<NodeId, double>>> row(rows);
  for (const Edge& e : edges_) {
    if (e.u < 0 || e.v >= n || e.u == e.v) continue;
    row[e.u].emplace_back(e.v, e.weight);
    row[e.v].emplace_back(e.u, e.weight);
  }
  auto adj = std::make_shared<Adjacency>();
  adj->offsets.assign(rows + 1, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    std::stable_sort(row[i].begin(), row[i].end(),
                     [](const auto& x, const auto& y) {
                       return x.first < y.first;
                     });
    adj->offsets[i + 1] = adj->offsets[i] + row[i].size();
    for (const auto& [j, w] : row[i]) {
      adj->neighbors.push_back(j);
      adj->weights.push_back(w);
    }
  }
  adjacency_ = std::move(adj);
}

std::span<const NodeId> Network::neighbors(NodeId i) const {
  const auto& a = *adjacency_;
  return {a.neighbors.data() + a.offsets[i],
          a.offsets[i + 1] - a.offsets[i]};
}

std::span<const double> Network::weights(NodeId i) const {
  const auto& a = *adjacency_;
  return {a.weights.data() + a.offsets[i], a.offsets[i + 1] - a.offsets[i]};
}

std::size_t Network::degree(NodeId i) const {
  return adjacency_->offsets[i + 1] - adjacency_->offsets[i];
}

double Network::weighted_degree(NodeId i) const {
  double sum = 0.0;
  for (double w : weights(i)) sum += w;
  return sum;
}

std::optional<double> Network::weight(NodeId i, NodeId j) const {
  if (i < 0 || i >= n_) return std::nullopt;
  const auto row = neighbors(i);
  const auto it = std::lower_bound(row.begin(), row.end(), j);
  if (it == row.end() || *it != j) return std::nullopt;
  return weights(i)[static_cast<std::size_t>(it - row.begin())];
}

std::optional<NodeId> first_unreachable(
    NodeId n, std::span<const std::pair<NodeId, NodeId>> edges) {
  if (n <= 1) return std::nullopt;
  std::vector<std::vector<NodeId>> adj(n);
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(n, 0);
  std::queue<NodeId> frontier;
  frontier.push(0);
  seen[0] = 1;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (NodeId v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        frontier.push(v);
      }
    }
  }
  for (NodeId i = 0; i < n; ++i) {
    if (!seen[i]) return i;
  }
  return std::nullopt;
}

std::optional<Error> validate(const Network& net) {
  const NodeId n = net.n();
  if (n <= 0) {
    return Error(ErrorCode::kInvalidParams, "network must have n >= 1");
  }
  if (net.gamma().size() != static_cast<std::size_t>(n) ||
      net.beta().size() != static_cast<std::size_t>(n)) {
    return Error(ErrorCode::kInvalidParams,
                 "gamma and beta must have one entry per node");
  }
  for (const Edge& e : net.edges()) {
    if (e.u < 0 || e.v >= n) {
      return Error(ErrorCode::kInvalidNode,
                   "edge " + edge_name(e) + " references a node outside [0," +
                       std::to_string(n) + ")");
    }
    if (e.u == e.v) {
      return Error(ErrorCode::kSelfLoop, "self-loop at node " +
                                             std::to_string(e.u));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      return Error(ErrorCode::kNonPositiveWeight,
                   "edge " + edge_name(e) + " has weight " +
                       std::to_string(e.weight));
    }
  }
  const auto& edges = net.edges();
  for (std::size_t k = 1; k < edges.size(); ++k) {
    const Edge& a = edges[k - 1];
    const Edge& b = edges[k];
    if (a.u == b.u && a.v == b.v) {
      if (a.weight != b.weight) {
        return Error(ErrorCode::kAsymmetricWeight,
                     "edge " + edge_name(a) + " given weights " +
                         std::to_string(a.weight) + " and " +
                         std::to_string(b.weight));
      }
      return Error(ErrorCode::kDuplicateEdge,
                   "edge " + edge_name(a) + " listed twice");
    }
  }
  for (NodeId i = 0; i < n; ++i) {
    const double g = net.gamma()[i];
    const double b = net.beta()[i];
    if (!(g > 0.0) || !std::isfinite(g)) {
      return Error(ErrorCode::kNonPositiveRate,
                   "gamma at node " + std::to_string(i) + " is " +
                       std::to_string(g));
    }
    if (!(b > 0.0) || !std::isfinite(b)) {
      return Error(ErrorCode::kNonPositiveRate,
                   "beta at node " + std::to_string(i) + " is " +
                       std::to_string(b));
    }
  }
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(edges.size());
  for (const Edge& e : edges) pairs.emplace_back(e.u, e.v);
  if (const auto missing = first_unreachable(n, pairs)) {
    return Error(ErrorCode::kNotConnected,
                 "node " + std::to_string(*missing) +
                     " is not reachable from node 0");
  }
  return std::nullopt;
}

void require_valid(const Network& net) {
  if (auto err = validate(net)) throw *err;
}

ClusterSet::ClusterSet(std::vector<std::vector<NodeId>> members_in,
                       std::vector<double> c1, std::vector<double> c2)
    : members(std::move(members_in)),
      cost_c1(std::move(c1)),
      cost_c2(std::move(c2)) {
  for (auto& m : members) {
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
  }
}

std::optional<Error> validate(const ClusterSet& cs, NodeId n) {
  const std::size_t m = cs.members.size();
  if (m == 0) {
    return Error(ErrorCode::kInvalidParams, "cluster set is empty");
  }
  if (cs.cost_c1.size() != m || cs.cost_c2.size() != m) {
    return Error(ErrorCode::kInvalidParams,
                 "cost_c1 and cost_c2 need one entry per cluster");
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (cs.members[r].empty()) {
      return Error(ErrorCode::kInvalidParams,
                   "cluster " + std::to_string(r) + " is empty");
    }
    for (NodeId i : cs.members[r]) {
      if (i < 0 || i >= n) {
        return Error(ErrorCode::kInvalidNode,
                     "cluster " + std::to_string(r) + " contains node " +
                         std::to_string(i));
      }
    }
    if (!(cs.cost_c1[r] >= 0.0) || !(cs.cost_c2[r] >= 0.0) ||
        !std::isfinite(cs.cost_c1[r]) || !std::isfinite(cs.cost_c2[r])) {
      return Error(ErrorCode::kInvalidParams,
                   "cluster " + std::to_string(r) + " has a negative cost");
    }
  }
  return std::nullopt;
}

void require_valid(const ClusterSet& cs, NodeId n) {
  if (auto err = validate(cs, n)) throw *err;
}

}  // namespace npicover
