#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "npicover/network.hpp"

using namespace npicover;

namespace {

ErrorCode code_of(const Network& net) {
  auto err = validate(net);
  EXPECT_TRUE(err.has_value());
  return err ? err->code() : ErrorCode::kIo;
}

}  // namespace

TEST(NetworkValidate, TwoNodeOk) {
  Network net(2, {{0, 1, 0.6}}, {0.4, 0.4}, {0.6, 0.6});
  EXPECT_FALSE(validate(net).has_value());
  EXPECT_EQ(net.degree(0), 1u);
  EXPECT_DOUBLE_EQ(*net.weight(1, 0), 0.6);
  EXPECT_FALSE(net.weight(0, 0).has_value());
}

TEST(NetworkValidate, IsolatedNodeIsNotConnected) {
  Network net(3, {{0, 1, 0.5}}, {0.4, 0.4, 0.4}, {0.6, 0.6, 0.6});
  auto err = validate(net);
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->code(), ErrorCode::kNotConnected);
  // The message names the unreachable node.
  EXPECT_NE(std::string(err->what()).find("2"), std::string::npos);
}

TEST(NetworkValidate, ZeroWeightIsNonPositiveWeight) {
  Network net(2, {{0, 1, 0.0}}, {0.4, 0.4}, {0.6, 0.6});
  EXPECT_EQ(code_of(net), ErrorCode::kNonPositiveWeight);
}

TEST(NetworkValidate, OtherFailures) {
  EXPECT_EQ(code_of(Network(2, {{0, 0, 0.5}, {0, 1, 0.5}}, {0.4, 0.4}, {0.6, 0.6})),
            ErrorCode::kSelfLoop);
  EXPECT_EQ(code_of(Network(2, {{0, 1, 0.5}, {1, 0, 0.7}}, {0.4, 0.4}, {0.6, 0.6})),
            ErrorCode::kAsymmetricWeight);
  EXPECT_EQ(code_of(Network(2, {{0, 1, 0.5}, {1, 0, 0.5}}, {0.4, 0.4}, {0.6, 0.6})),
            ErrorCode::kDuplicateEdge);
  EXPECT_EQ(code_of(Network(2, {{0, 5, 0.5}}, {0.4, 0.4}, {0.6, 0.6})),
            ErrorCode::kInvalidNode);
  EXPECT_EQ(code_of(Network(2, {{0, 1, 0.5}}, {0.0, 0.4}, {0.6, 0.6})),
            ErrorCode::kNonPositiveRate);
  EXPECT_EQ(code_of(Network(2, {{0, 1, 0.5}}, {0.4}, {0.6, 0.6})),
            ErrorCode::kInvalidParams);
  EXPECT_THROW(require_valid(Network(2, {}, {0.4, 0.4}, {0.6, 0.6})), Error);
}

TEST(WattsStrogatz, DefaultScaleHas200Edges) {
  const Topology t = watts_strogatz(100, 4, 0.2, 7);
  EXPECT_EQ(t.n, 100);
  EXPECT_EQ(t.edges.size(), 200u);
  EXPECT_FALSE(first_unreachable(t.n, t.edges).has_value());
  std::set<std::pair<NodeId, NodeId>> unique(t.edges.begin(), t.edges.end());
  EXPECT_EQ(unique.size(), t.edges.size());
  for (auto [u, v] : t.edges) EXPECT_LT(u, v);
}

TEST(WattsStrogatz, NoRewiringGivesRing) {
  const Topology t = watts_strogatz(6, 2, 0.0, 99);
  const std::vector<std::pair<NodeId, NodeId>> ring{
      {0, 1}, {0, 5}, {1, 2}, {2, 3}, {3, 4}, {4, 5}};
  EXPECT_EQ(t.edges, ring);
}

TEST(WattsStrogatz, Deterministic) {
  EXPECT_EQ(watts_strogatz(20, 4, 1.0, 3).edges, watts_strogatz(20, 4, 1.0, 3).edges);
  EXPECT_NE(watts_strogatz(20, 4, 1.0, 3).edges, watts_strogatz(20, 4, 1.0, 4).edges);
}

TEST(WattsStrogatz, RejectsBadArguments) {
  EXPECT_THROW(watts_strogatz(4, 4, 0.1, 1), Error);
  EXPECT_THROW(watts_strogatz(10, 3, 0.1, 1), Error);
  EXPECT_THROW(watts_strogatz(10, 4, 1.5, 1), Error);
}

TEST(RandomParameters, SamplesInsideRanges) {
  const Topology t = watts_strogatz(100, 4, 0.2, 1);
  const Network net = random_parameters(t, {0.4, 0.5}, {0.6, 0.7}, {0.5, 0.7}, 11);
  EXPECT_FALSE(validate(net).has_value());
  for (double g : net.gamma()) EXPECT_TRUE(g >= 0.4 && g <= 0.5);
  for (double b : net.beta()) EXPECT_TRUE(b >= 0.6 && b <= 0.7);
  for (const Edge& e : net.edges()) EXPECT_TRUE(e.weight >= 0.5 && e.weight <= 0.7);
  EXPECT_EQ(net, random_parameters(t, {0.4, 0.5}, {0.6, 0.7}, {0.5, 0.7}, 11));
}

TEST(RandomParameters, DegenerateRange) {
  const Topology t = watts_strogatz(10, 2, 0.0, 1);
  const Network net = random_parameters(t, {0.5, 0.5}, {0.6, 0.7}, {0.5, 0.7}, 2);
  for (double g : net.gamma()) EXPECT_EQ(g, 0.5);
}

TEST(RandomClusters, ShapeAndCosts) {
  const Topology t = watts_strogatz(100, 4, 0.2, 1);
  const Network net = random_parameters(t, {0.4, 0.5}, {0.4, 0.6}, {0.4, 0.5}, 1);
  const std::vector<double> costs{1, 2, 3, 4};
  const ClusterSet cs = random_clusters(net, 25, {10, 15}, costs, 5);
  ASSERT_EQ(cs.size(), 25);
  EXPECT_FALSE(validate(cs, net.n()).has_value());
  for (ClusterId r = 0; r < cs.size(); ++r) {
    EXPECT_GE(cs[r].size(), 10u);
    EXPECT_LE(cs[r].size(), 15u);
    EXPECT_TRUE(std::is_sorted(cs[r].begin(), cs[r].end()));
    EXPECT_NE(std::find(costs.begin(), costs.end(), cs.cost_c1[r]), costs.end());
    EXPECT_NE(std::find(costs.begin(), costs.end(), cs.cost_c2[r]), costs.end());
  }
  EXPECT_EQ(cs, random_clusters(net, 25, {10, 15}, costs, 5));
}

TEST(RandomClusters, FullSizeSingleCluster) {
  const Topology t = watts_strogatz(12, 2, 0.3, 1);
  const Network net = random_parameters(t, {0.4, 0.5}, {0.4, 0.6}, {0.4, 0.5}, 1);
  const std::vector<double> costs{2};
  const ClusterSet cs = random_clusters(net, 1, {12, 12}, costs, 9);
  ASSERT_EQ(cs.size(), 1);
  EXPECT_EQ(cs[0].size(), 12u);
}

TEST(ClusterSetValidate, Failures) {
  EXPECT_TRUE(validate(ClusterSet({{0, 7}}, {1}, {1}), 3).has_value());
  EXPECT_TRUE(validate(ClusterSet({{}}, {1}, {1}), 3).has_value());
  EXPECT_TRUE(validate(ClusterSet({{0}}, {1, 2}, {1}), 3).has_value());
  EXPECT_FALSE(validate(ClusterSet({{1, 0, 1}}, {1}, {1}), 3).has_value());
}
