#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "npicover/network.hpp"
#include "npicover/rng.hpp"

namespace npicover {

namespace {

constexpr int kMaxRewireAttempts = 100;

void check_range(const Range& r, const char* name) {
  if (!(r.lo > 0.0) || !(r.hi >= r.lo)) {
    throw Error(ErrorCode::kInvalidParams,
                std::string(name) + " range must satisfy 0 < lo <= hi");
  }
}

Topology rewired_lattice(NodeId n, int k, double p, Rng& rng) {
  std::vector<std::set<NodeId>> adj(n);
  for (int j = 1; j <= k / 2; ++j) {
    for (NodeId u = 0; u < n; ++u) {
      const NodeId v = (u + j) % n;
      adj[u].insert(v);
      adj[v].insert(u);
    }
  }
  // One-sided rewiring: edge (u, u+j) keeps u and moves its far end to a
  // uniformly chosen node that is neither u nor already adjacent to u.
  for (int j = 1; j <= k / 2; ++j) {
    for (NodeId u = 0; u < n; ++u) {
      const NodeId v = (u + j) % n;
      if (!rng.bernoulli(p)) continue;
      if (!adj[u].contains(v)) continue;  // already moved away by an earlier rewire
      if (adj[u].size() >= static_cast<std::size_t>(n - 1)) continue;
      NodeId w = static_cast<NodeId>(rng.below(n));
      while (w == u || adj[u].contains(w)) {
        w = static_cast<NodeId>(rng.below(n));
      }
      adj[u].erase(v);
      adj[v].erase(u);
      adj[u].insert(w);
      adj[w].insert(u);
    }
  }
  Topology t;
  t.n = n;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : adj[u]) {
      if (u < v) t.edges.emplace_back(u, v);
    }
  }
  return t;
}

}  // namespace

Topology watts_strogatz(NodeId n, int k, double p, std::uint64_t seed) {
  if (k < 2 || k % 2 != 0 || n <= k) {
    throw Error(ErrorCode::kInvalidParams,
                "watts_strogatz needs n > k >= 2 with k even (got n=" +
                    std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kInvalidParams, "rewiring probability outside [0,1]");
  }
  for (int attempt = 0; attempt < kMaxRewireAttempts; ++attempt) {
    Rng rng(derive_seed(seed, Stream::kTopology, attempt));
    Topology t = rewired_lattice(n, k, p, rng);
    if (!first_unreachable(t.n, t.edges)) return t;
  }
  throw Error(ErrorCode::kNotConnected,
              "watts_strogatz produced disconnected graphs in " +
                  std::to_string(kMaxRewireAttempts) + " attempts");
}

Network random_parameters(const Topology& topology, Range gamma_range,
                          Range beta_range, Range weight_range,
                          std::uint64_t seed) {
  check_range(gamma_range, "gamma");
  check_range(beta_range, "beta");
  check_range(weight_range, "weight");
  Rng rng(derive_seed(seed, Stream::kRates));
  std::vector<double> gamma(topology.n);
  std::vector<double> beta(topology.n);
  for (auto& g : gamma) g = rng.uniform(gamma_range.lo, gamma_range.hi);
  for (auto& b : beta) b = rng.uniform(beta_range.lo, beta_range.hi);
  std::vector<Edge> edges;
  edges.reserve(topology.edges.size());
  for (const auto& [u, v] : topology.edges) {
    edges.push_back({u, v, rng.uniform(weight_range.lo, weight_range.hi)});
  }
  return Network(topology.n, std::move(edges), std::move(gamma),
                 std::move(beta));
}

ClusterSet random_clusters(const Network& net, ClusterId count,
                           std::pair<NodeId, NodeId> size_range,
                           std::span<const double> cost_choices,
                           std::uint64_t seed) {
  const auto [min_size, max_size] = size_range;
  if (count < 1 || min_size < 1 || min_size > max_size || max_size > net.n()) {
    throw Error(ErrorCode::kInvalidParams,
                "random_clusters needs count >= 1 and 1 <= min <= max <= n");
  }
  if (cost_choices.empty()) {
    throw Error(ErrorCode::kInvalidParams, "cost_choices is empty");
  }
  for (double c : cost_choices) {
    if (!(c >= 0.0)) {
      throw Error(ErrorCode::kInvalidParams, "cost choices must be >= 0");
    }
  }
  Rng rng(derive_seed(seed, Stream::kClusters));
  std::vector<NodeId> pool(net.n());
  std::vector<std::vector<NodeId>> members;
  std::vector<double> c1;
  std::vector<double> c2;
  for (ClusterId r = 0; r < count; ++r) {
    const auto size = static_cast<NodeId>(rng.between(min_size, max_size));
    // Partial Fisher-Yates over a fresh identity permutation.
    std::iota(pool.begin(), pool.end(), 0);
    for (NodeId s = 0; s < size; ++s) {
      const auto pick = s + static_cast<NodeId>(rng.below(net.n() - s));
      std::swap(pool[s], pool[pick]);
    }
    members.emplace_back(pool.begin(), pool.begin() + size);
    c1.push_back(cost_choices[rng.below(cost_choices.size())]);
    c2.push_back(cost_choices[rng.below(cost_choices.size())]);
  }
  return ClusterSet(std::move(members), std::move(c1), std::move(c2));
}

}  // namespace npicover
