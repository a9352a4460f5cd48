#include <gtest/gtest.h>

#include "npicover/npi.hpp"

using namespace npicover;

namespace {

// Path 0-1-2 with unit parameters, so rates equal weights.
Network path3() {
  return Network(3, {{0, 1, 0.6}, {1, 2, 0.6}}, {0.4, 0.4, 0.4}, {1.0, 1.0, 1.0});
}

}  // namespace

TEST(NpiParams, Validation) {
  EXPECT_FALSE(validate(NpiParams{0.7, 0.9}).has_value());
  EXPECT_FALSE(validate(NpiParams{0.51, 0.51}).has_value());
  EXPECT_TRUE(validate(NpiParams{0.3, 0.6}).has_value());
  EXPECT_FALSE(validate(NpiParams{0.3, 0.6, true}).has_value());
  EXPECT_TRUE(validate(NpiParams{0.9, 0.7}).has_value());
  EXPECT_TRUE(validate(NpiParams{0.7, 1.0}).has_value());
  EXPECT_TRUE(supermodular_regime(NpiParams{0.7, 0.9}));
  EXPECT_FALSE(supermodular_regime(NpiParams{0.2, 0.9, true}));
}

TEST(Strategy, SortedUniqueAndMask) {
  const Strategy s({3, 1, 3, 2});
  EXPECT_EQ(s.ids(), (std::vector<ClusterId>{1, 2, 3}));
  EXPECT_EQ(Strategy::from_mask(0b101, 3), Strategy({0, 2}));
  EXPECT_TRUE(s.with(0).contains(0));
  EXPECT_FALSE(s.contains(0));
}

TEST(SelectedNodes, Union) {
  const ClusterSet cs({{0, 1}, {1, 2}}, {1, 1}, {1, 1});
  EXPECT_EQ(selected_nodes(cs, Strategy({0, 1}), 3).to_vector(),
            (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(selected_nodes(cs, Strategy(), 3).count(), 0u);
  EXPECT_EQ(selected_nodes(cs, Strategy({1}), 3).to_vector(),
            (std::vector<NodeId>{1, 2}));
}

TEST(EffectiveRate, ThreeCoverageCases) {
  const Network net = path3();
  const NpiParams p{0.7, 0.9};
  NodeSet both(3), only_i(3), none(3);
  both.insert(0);
  both.insert(1);
  only_i.insert(0);
  EXPECT_NEAR(effective_rate(net, p, both, 0, 1), 0.06, 1e-15);
  EXPECT_NEAR(effective_rate(net, p, only_i, 0, 1), 0.18, 1e-15);
  EXPECT_NEAR(effective_rate(net, p, only_i, 1, 0), 0.18, 1e-15);
  EXPECT_DOUBLE_EQ(effective_rate(net, p, none, 0, 1), 0.6);
  EXPECT_THROW(effective_rate(net, p, none, 0, 2), Error);
}

TEST(LambdaMatrix, EmptyAndFullCoverage) {
  const Network net(3, {{0, 1, 0.5}, {1, 2, 0.8}}, {0.4, 0.4, 0.4}, {0.3, 0.6, 0.9});
  const NpiParams p{0.7, 0.9};
  const ClusterSet cs({{0, 1, 2}}, {1}, {1});
  const RateMatrix free = lambda_matrix(net, p, cs, Strategy());
  const RateMatrix full = lambda_matrix(net, p, cs, Strategy({0}));
  for (NodeId i = 0; i < 3; ++i) {
    for (NodeId j : net.neighbors(i)) {
      const double base = net.beta()[i] * *net.weight(i, j);
      EXPECT_DOUBLE_EQ(*free.rate(i, j), base);
      EXPECT_NEAR(*full.rate(i, j), base * 0.1, 1e-15);
    }
  }
}

TEST(LambdaMatrix, AsymmetryFromBeta) {
  const Network net(2, {{0, 1, 1.0}}, {0.4, 0.4}, {0.6, 0.5});
  const RateMatrix m = lambda_matrix(net, NpiParams{}, NodeSet(2));
  EXPECT_DOUBLE_EQ(*m.rate(0, 1), 0.6);
  EXPECT_DOUBLE_EQ(*m.rate(1, 0), 0.5);
}

TEST(Costs, C1) {
  const ClusterSet cs({{0, 1, 2}, {3, 4}}, {2, 1}, {1, 1});
  EXPECT_EQ(cost_c1(cs, Strategy({0, 1})), 8.0);
  EXPECT_EQ(cost_c1(cs, Strategy()), 0.0);
  const ClusterSet overlap({{0, 1}, {1, 2}}, {1, 1}, {1, 1});
  EXPECT_EQ(cost_c1(overlap, Strategy({0, 1})), 4.0);
  EXPECT_EQ(c1_weights(cs), (std::vector<double>{6.0, 2.0}));
}

TEST(Costs, C2PerNodeMax) {
  const ClusterSet cs({{0, 1}, {1, 2}}, {1, 1}, {3, 5});
  EXPECT_EQ(cost_c2(cs, Strategy({0, 1})), 13.0);
  EXPECT_EQ(cost_c2(cs, Strategy()), 0.0);
  EXPECT_EQ(cost_c2(cs, Strategy({0})), 6.0);
}

TEST(Costs, C3CountsDistinctNodes) {
  std::vector<NodeId> big(81);
  for (NodeId i = 0; i < 81; ++i) big[i] = i;
  const ClusterSet cs({big, {0, 1}}, {1, 1}, {1, 1});
  EXPECT_EQ(cost_c3(cs, Strategy({0, 1}), 1.0), 81.0);
  EXPECT_EQ(cost_c3(cs, Strategy(), 1.0), 0.0);
  EXPECT_EQ(cost_c3(cs, Strategy({0}), 0.0), 0.0);
}

TEST(Costs, Total) {
  const ClusterSet cs({{0, 1}, {1, 2}}, {1, 1}, {3, 5});
  const Strategy both({0, 1});
  EXPECT_EQ(total_cost(cs, both, CostModel{{1, 0, 0}, 1}), 4.0);
  EXPECT_EQ(total_cost(cs, both, CostModel{{0, 0, 0}, 1}), 0.0);
  // 4 (C1) + 13 (C2) + 3 (C3 over {0,1,2}).
  EXPECT_EQ(total_cost(cs, both, CostModel{{1, 1, 1}, 1}), 20.0);
  EXPECT_TRUE(validate(CostModel{{-1, 0, 0}, 1}).has_value());
  // A single cluster of 303 unit-cost nodes under the C1-only model.
  std::vector<NodeId> members(101);
  for (NodeId i = 0; i < 101; ++i) members[i] = i;
  const ClusterSet table({members}, {3}, {1});
  EXPECT_EQ(total_cost(table, Strategy({0}), CostModel{}), 303.0);
}
