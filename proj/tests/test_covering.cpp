#include <gtest/gtest.h>

#include <algorithm>

#include "npicover/covering.hpp"
#include "npicover/experiment.hpp"
#include "npicover/properties.hpp"

using namespace npicover;

namespace {

Instance two_node_instance(std::vector<double> gamma, std::vector<double> beta) {
  Network net(2, {{0, 1, 1.0}}, std::move(gamma), std::move(beta));
  return Instance{std::move(net), ClusterSet({{0}, {1}}, {1, 1}, {1, 1}),
                  NpiParams{0.7, 0.9}};
}

const Instance& section_v_instance() {
  static const Instance inst = build_instance(ExperimentConfig{}, 1).instance;
  return inst;
}

Instance small_random(std::uint64_t seed, ClusterId clusters) {
  properties::RandomInstanceSpec spec;
  spec.clusters = clusters;
  spec.n_min = 6;
  spec.n_max = 12;
  return properties::random_instance(seed, spec);
}

}  // namespace

TEST(JI, DirectFormula) {
  const Instance inst = two_node_instance({0.5, 0.5}, {0.3, 0.3});
  EXPECT_NEAR(j_i(inst, Strategy(), Threshold::uniform(2, 0.05), 0), -0.010750, 1e-15);
}

TEST(JI, ThresholdOneGivesMinusGamma) {
  const Instance inst = two_node_instance({0.45, 0.5}, {0.9, 0.9});
  const Threshold ones = Threshold::uniform(2, 1.0);
  EXPECT_EQ(j_i(inst, Strategy(), ones, 0), -0.45);
  EXPECT_EQ(j_i(inst, Strategy(), ones, 1), -0.5);
}

TEST(JI, VanishesAtEndemicState) {
  const Instance inst = two_node_instance({0.4, 0.4}, {0.6, 0.6});
  const SteadyState s = endemic_fixed_point(make_system(inst, Strategy()));
  const Threshold t{s.x_star};
  EXPECT_NEAR(j_i(inst, Strategy(), t, 0), 0.0, 1e-9);
  EXPECT_NEAR(j_i(inst, Strategy(), t, 1), 0.0, 1e-9);
}

TEST(JBar, ClippedSum) {
  const Instance feasible = two_node_instance({0.5, 0.5}, {0.3, 0.3});
  EXPECT_EQ(j_bar(feasible, Strategy(), Threshold::uniform(2, 0.05)), 0.0);
  // Node 0 violates by exactly 0.02, node 1 is comfortably negative.
  const Instance one_bad = two_node_instance({0.1, 1.0}, {0.28, 0.28});
  EXPECT_NEAR(j_bar(one_bad, Strategy(), Threshold::uniform(2, 0.5)), 0.02, 1e-15);
}

TEST(JBar, NonincreasingAlongChain) {
  const Instance& inst = section_v_instance();
  const CoverEvaluator eval(inst, Threshold::uniform(inst.network.n(), 0.05));
  Strategy s;
  double prev = eval.j_bar(s);
  for (ClusterId r = 0; r < eval.cluster_count(); ++r) {
    s.insert(r);
    const double next = eval.j_bar(s);
    EXPECT_LE(next, prev);
    prev = next;
  }
}

TEST(Threshold, Validation) {
  EXPECT_TRUE(validate(Threshold::uniform(3, 0.0), 3).has_value());
  EXPECT_TRUE(validate(Threshold::uniform(2, 0.5), 3).has_value());
  EXPECT_FALSE(validate(Threshold::uniform(3, 1.0), 3).has_value());
}

TEST(Sufficiency, GreedyStrategyIsCertifiedAndHolds) {
  const Instance& inst = section_v_instance();
  const Threshold t = Threshold::uniform(inst.network.n(), 0.05);
  const GreedyResult g = greedy_cover(inst, t, c1_weights(inst.clusters));
  const SufficiencyReport rep = check_sufficiency(inst, g.strategy, t);
  EXPECT_TRUE(rep.certified);
  EXPECT_TRUE(rep.violators.empty());
  EXPECT_LE(rep.max_excess, kSufficiencySlack);
}

TEST(Sufficiency, EmptyStrategyNotCertified) {
  const Instance& inst = section_v_instance();
  const SufficiencyReport rep =
      check_sufficiency(inst, Strategy(), Threshold::uniform(inst.network.n(), 0.05));
  EXPECT_FALSE(rep.certified);
  EXPECT_FALSE(rep.violators.empty());
  EXPECT_GT(rep.max_excess, 0.0);
}

TEST(Sufficiency, ThresholdOneAlwaysCertified) {
  const Instance& inst = section_v_instance();
  const Threshold ones = Threshold::uniform(inst.network.n(), 1.0);
  EXPECT_TRUE(check_sufficiency(inst, Strategy(), ones).certified);
  EXPECT_TRUE(check_sufficiency(inst, Strategy({3, 7}), ones).certified);
}

TEST(Greedy, SectionVInstanceReachesZero) {
  const Instance& inst = section_v_instance();
  const GreedyResult g = greedy_cover(inst, Threshold::uniform(inst.network.n(), 0.05),
                                      c1_weights(inst.clusters));
  EXPECT_EQ(g.jbar_final, 0.0);
  EXPECT_GT(g.jbar_initial, 0.0);
  EXPECT_EQ(g.trace.size(), g.strategy.size());
  EXPECT_GE(g.strategy.size(), 5u);
  EXPECT_LE(g.strategy.size(), 20u);
  EXPECT_EQ(g.cost, cost_c1(inst.clusters, g.strategy));
  EXPECT_GE(g.bound_ratio, 1.0);
  EXPECT_FALSE(g.degenerate_bound);
  for (std::size_t k = 1; k < g.trace.size(); ++k) {
    EXPECT_LT(g.trace[k].jbar_after, g.trace[k - 1].jbar_after);
  }
}

TEST(Greedy, SingleFullClusterOneStep) {
  Network net(3, {{0, 1, 1.0}, {1, 2, 1.0}}, {0.4, 0.4, 0.4}, {0.6, 0.6, 0.6});
  const Instance inst{std::move(net), ClusterSet({{0, 1, 2}}, {1}, {1}), NpiParams{}};
  const GreedyResult g = greedy_cover(inst, Threshold::uniform(3, 0.05), std::vector<double>{3});
  EXPECT_EQ(g.strategy, Strategy({0}));
  EXPECT_EQ(g.jbar_final, 0.0);
  EXPECT_TRUE(g.degenerate_bound);
  EXPECT_EQ(g.bound_ratio, 1.0);
}

TEST(Greedy, InfeasibleReportsJBarOfEverything) {
  const Instance inst = two_node_instance({0.1, 0.1}, {5.0, 5.0});
  try {
    greedy_cover(inst, Threshold::uniform(2, 0.01), std::vector<double>{1, 1});
    FAIL() << "expected Infeasible";
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
    EXPECT_GT(e.jbar_all(), 0.0);
  }
}

TEST(Greedy, RejectsBadWeights) {
  const Instance inst = two_node_instance({0.5, 0.5}, {0.3, 0.3});
  EXPECT_THROW(greedy_cover(inst, Threshold::uniform(2, 0.5), std::vector<double>{1}),
               Error);
  EXPECT_THROW(greedy_cover(inst, Threshold::uniform(2, 0.5), std::vector<double>{1, 0}),
               Error);
}

TEST(BruteForce, EmptyWhenAlreadyFeasible) {
  const Instance inst = two_node_instance({0.5, 0.5}, {0.3, 0.3});
  const CoverSolution sol =
      brute_force_cover(inst, Threshold::uniform(2, 0.9), std::vector<double>{1, 1});
  EXPECT_TRUE(sol.strategy.empty());
  EXPECT_EQ(sol.cost, 0.0);
  const GreedyResult g =
      greedy_cover(inst, Threshold::uniform(2, 0.9), std::vector<double>{1, 1});
  EXPECT_TRUE(g.strategy.empty());
  EXPECT_EQ(g.cost, 0.0);
}

TEST(BruteForce, InfeasibleTinyInstance) {
  const Instance inst = two_node_instance({0.1, 0.1}, {5.0, 5.0});
  EXPECT_THROW(brute_force_cover(inst, Threshold::uniform(2, 0.01), std::vector<double>{1, 1}),
               Error);
}

TEST(BruteForce, NeverWorseThanGreedyOnSmallInstances) {
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance inst = small_random(seed, 3);
    const auto x = properties::interesting_threshold(inst, 0.5);
    if (!x) continue;
    const Threshold t = Threshold::uniform(inst.network.n(), *x);
    const auto w = c1_weights(inst.clusters);
    const CoverSolution opt = brute_force_cover(inst, t, w);
    const GreedyResult g = greedy_cover(inst, t, w);
    EXPECT_EQ(j_bar(inst, opt.strategy, t), 0.0);
    EXPECT_LE(opt.cost, g.cost);
    EXPECT_LE(g.cost, g.bound_ratio * opt.cost * (1 + 1e-12));
    ++compared;
  }
  EXPECT_GT(compared, 5);
}

TEST(BruteForce, TooManyClusters) {
  std::vector<std::vector<NodeId>> members(21, std::vector<NodeId>{0});
  Network net(2, {{0, 1, 1.0}}, {0.5, 0.5}, {0.3, 0.3});
  const Instance inst{std::move(net),
                      ClusterSet(members, std::vector<double>(21, 1), std::vector<double>(21, 1)),
                      NpiParams{}};
  try {
    brute_force_cover(inst, Threshold::uniform(2, 0.5), std::vector<double>(21, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooManyClusters);
  }
}

TEST(Baseline, IdenticalClustersInIndexOrder) {
  // A 4-cycle where every cluster is the whole graph: one suffices.
  Network net(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {0, 3, 1.0}},
              {0.4, 0.4, 0.4, 0.4}, {0.6, 0.6, 0.6, 0.6});
  const std::vector<NodeId> all{0, 1, 2, 3};
  const Instance inst{std::move(net), ClusterSet({all, all, all}, {1, 1, 1}, {1, 1, 1}),
                      NpiParams{}};
  EXPECT_EQ(baseline_degree(inst, Threshold::uniform(4, 0.05)), Strategy({0}));
}

TEST(Baseline, SectionVFeasibleAndCostlierThanGreedy) {
  const Instance& inst = section_v_instance();
  const Threshold t = Threshold::uniform(inst.network.n(), 0.05);
  const Strategy b = baseline_degree(inst, t);
  EXPECT_EQ(j_bar(inst, b, t), 0.0);
  const GreedyResult g = greedy_cover(inst, t, c1_weights(inst.clusters));
  EXPECT_LE(g.cost, cost_c1(inst.clusters, b));
}
