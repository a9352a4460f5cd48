#include "npicover/npi.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace npicover {

std::optional<Error> validate(const NpiParams& p) {
  const double floor = p.relaxed ? 0.0 : 0.5;
  if (!(p.theta1 > floor && p.theta1 <= p.theta2 && p.theta2 < 1.0)) {
    return Error(ErrorCode::kInvalidParams,
                 "need " + std::string(p.relaxed ? "0" : "0.5") +
                     " < theta1 <= theta2 < 1 (got theta1=" +
                     std::to_string(p.theta1) +
                     ", theta2=" + std::to_string(p.theta2) + ")");
  }
  return std::nullopt;
}

void require_valid(const NpiParams& params) {
  if (auto err = validate(params)) throw *err;
}

bool supermodular_regime(const NpiParams& p) {
  return 2.0 * p.theta1 >= p.theta2;
}

Strategy::Strategy(std::vector<ClusterId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

Strategy Strategy::from_mask(std::uint64_t mask, ClusterId cluster_count) {
  Strategy s;
  for (ClusterId r = 0; r < cluster_count; ++r) {
    if (mask >> r & 1U) s.ids_.push_back(r);
  }
  return s;
}

bool Strategy::contains(ClusterId r) const {
  return std::binary_search(ids_.begin(), ids_.end(), r);
}

void Strategy::insert(ClusterId r) {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), r);
  if (it == ids_.end() || *it != r) ids_.insert(it, r);
}

Strategy Strategy::with(ClusterId r) const {
  Strategy s = *this;
  s.insert(r);
  return s;
}

std::optional<Error> validate(const Strategy& s, const ClusterSet& cs) {
  for (ClusterId r : s) {
    if (r < 0 || r >= cs.size()) {
      return Error(ErrorCode::kInvalidParams,
                   "strategy references cluster " + std::to_string(r) +
                       " but only " + std::to_string(cs.size()) + " exist");
    }
  }
  return std::nullopt;
}

std::optional<Error> validate(const CostModel& model) {
  for (double a : model.alpha) {
    if (!(a >= 0.0)) {
      return Error(ErrorCode::kInvalidParams, "cost alphas must be >= 0");
    }
  }
  if (!(model.c0 >= 0.0)) {
    return Error(ErrorCode::kInvalidParams, "c0 must be >= 0");
  }
  return std::nullopt;
}

void NodeSet::insert(NodeId i) {
  if (!member_[i]) {
    member_[i] = 1;
    ++count_;
  }
}

std::vector<NodeId> NodeSet::to_vector() const {
  std::vector<NodeId> out;
  out.reserve(count_);
  for (NodeId i = 0; i < universe(); ++i) {
    if (member_[i]) out.push_back(i);
  }
  return out;
}

NodeSet selected_nodes(const ClusterSet& cs, const Strategy& s, NodeId n) {
  NodeSet covered(n);
  for (ClusterId r : s) {
    for (NodeId i : cs[r]) covered.insert(i);
  }
  return covered;
}

double effective_rate(const Network& net, const NpiParams& params,
                      const NodeSet& covered, NodeId i, NodeId j) {
  const auto a = net.weight(i, j);
  if (!a) {
    throw Error(ErrorCode::kNotAnEdge, "(" + std::to_string(i) + "," +
                                           std::to_string(j) +
                                           ") is not an edge");
  }
  return net.beta()[i] * *a *
         npi_factor(params, covered.contains(i), covered.contains(j));
}

RateMatrix::RateMatrix(std::shared_ptr<const Adjacency> pattern,
                       std::vector<double> values)
    : pattern_(std::move(pattern)), values_(std::move(values)) {
  if (values_.size() != pattern_->neighbors.size()) {
    throw Error(ErrorCode::kInvalidParams,
                "rate values do not match the adjacency pattern");
  }
}

std::span<const NodeId> RateMatrix::columns(NodeId i) const {
  const auto& p = *pattern_;
  return {p.neighbors.data() + p.offsets[i], p.offsets[i + 1] - p.offsets[i]};
}

std::span<const double> RateMatrix::row(NodeId i) const {
  const auto& p = *pattern_;
  return {values_.data() + p.offsets[i], p.offsets[i + 1] - p.offsets[i]};
}

std::optional<double> RateMatrix::rate(NodeId i, NodeId j) const {
  const auto cols = columns(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return std::nullopt;
  return row(i)[static_cast<std::size_t>(it - cols.begin())];
}

double RateMatrix::row_sum(NodeId i) const {
  double d = 0.0;
  for (double v : row(i)) d += v;
  return d;
}

RateMatrix lambda_matrix(const Network& net, const NpiParams& params,
                         const NodeSet& covered) {
  const Adjacency& adj = *net.adjacency();
  std::vector<double> values(adj.neighbors.size());
  for (NodeId i = 0; i < net.n(); ++i) {
    const bool in_i = covered.contains(i);
    const double beta = net.beta()[i];
    for (std::size_t k = adj.offsets[i]; k < adj.offsets[i + 1]; ++k) {
      values[k] = beta * adj.weights[k] *
                  npi_factor(params, in_i, covered.contains(adj.neighbors[k]));
    }
  }
  return RateMatrix(net.adjacency(), std::move(values));
}

RateMatrix lambda_matrix(const Network& net, const NpiParams& params,
                         const ClusterSet& cs, const Strategy& s) {
  return lambda_matrix(net, params, selected_nodes(cs, s, net.n()));
}

double cost_c1(const ClusterSet& cs, const Strategy& s) {
  double total = 0.0;
  for (ClusterId r : s) {
    total += cs.cost_c1[r] * static_cast<double>(cs[r].size());
  }
  return total;
}

namespace {

// (node, c2) for every membership of a selected cluster, sorted by node and
// then by descending price, so the first entry per node carries its max.
std::vector<std::pair<NodeId, double>> priced_members(const ClusterSet& cs,
                                                      const Strategy& s) {
  std::vector<std::pair<NodeId, double>> out;
  for (ClusterId r : s) {
    for (NodeId i : cs[r]) out.emplace_back(i, cs.cost_c2[r]);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  return out;
}

}  // namespace

double cost_c2(const ClusterSet& cs, const Strategy& s) {
  const auto members = priced_members(cs, s);
  double total = 0.0;
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (k == 0 || members[k].first != members[k - 1].first) {
      total += members[k].second;
    }
  }
  return total;
}

double cost_c3(const ClusterSet& cs, const Strategy& s, double c0) {
  const auto members = priced_members(cs, s);
  std::size_t distinct = 0;
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (k == 0 || members[k].first != members[k - 1].first) ++distinct;
  }
  return c0 * static_cast<double>(distinct);
}

double total_cost(const ClusterSet& cs, const Strategy& s,
                  const CostModel& model) {
  double total = 0.0;
  if (model.alpha[0] != 0.0) total += model.alpha[0] * cost_c1(cs, s);
  if (model.alpha[1] != 0.0) total += model.alpha[1] * cost_c2(cs, s);
  if (model.alpha[2] != 0.0) total += model.alpha[2] * cost_c3(cs, s, model.c0);
  return total;
}

std::vector<double> c1_weights(const ClusterSet& cs) {
  std::vector<double> w(cs.members.size());
  for (std::size_t r = 0; r < w.size(); ++r) {
    w[r] = cs.cost_c1[r] * static_cast<double>(cs.members[r].size());
  }
  return w;
}

void require_valid(const Instance& instance) {
  require_valid(instance.network);
  require_valid(instance.clusters, instance.network.n());
  require_valid(instance.npi);
}

}  // namespace npicover
