#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "npicover/experiment.hpp"
#include "npicover/io.hpp"

using namespace npicover;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.seeds = {1, 2, 3};
  return c;
}

}  // namespace

TEST(Config, DefaultsValidate) {
  EXPECT_FALSE(validate(ExperimentConfig{}).has_value());
  ExperimentConfig bad;
  bad.thresholds = {};
  EXPECT_TRUE(validate(bad).has_value());
  bad = ExperimentConfig{};
  bad.network.k = 3;
  EXPECT_TRUE(validate(bad).has_value());
  bad = ExperimentConfig{};
  bad.max_regen = -1;
  EXPECT_TRUE(validate(bad).has_value());
}

TEST(BuildInstance, FeasibleAndDeterministic) {
  const ExperimentConfig c;
  const BuiltInstance a = build_instance(c, 1);
  const BuiltInstance b = build_instance(c, 1);
  EXPECT_EQ(a.instance.network, b.instance.network);
  EXPECT_EQ(a.instance.clusters, b.instance.clusters);
  EXPECT_EQ(a.regen, b.regen);
  EXPECT_LE(a.regen, 10);
  EXPECT_EQ(a.instance.network.n(), 100);
  EXPECT_EQ(a.instance.network.edge_count(), 200u);
  EXPECT_EQ(a.instance.clusters.size(), 25);
  EXPECT_FALSE(build_instance(c, 2).instance.network == a.instance.network);
}

TEST(BuildInstance, HostileConfigGivesUp) {
  ExperimentConfig c;
  c.npi = NpiParams{0.51, 0.51};
  c.thresholds = {0.001};
  c.max_regen = 1;
  try {
    build_instance(c, 1);
    FAIL() << "expected InfeasibleAfterRetries";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleAfterRetries);
  }
}

TEST(RandomInitialState, InUnitBoxAndNonzero) {
  const auto x = random_initial_state(50, 3);
  ASSERT_EQ(x.size(), 50u);
  for (double v : x) EXPECT_TRUE(v >= 0.0 && v <= 1.0);
  EXPECT_TRUE(std::any_of(x.begin(), x.end(), [](double v) { return v > 0.0; }));
  EXPECT_EQ(x, random_initial_state(50, 3));
}

TEST(Comparison, UncontrolledHighControlledBelowTarget) {
  const ComparisonBundle b = run_comparison(ExperimentConfig{}, 1, 0.05);
  ASSERT_TRUE(b.greedy.has_value());
  EXPECT_TRUE(b.certified);
  EXPECT_FALSE(b.degenerate);
  const auto& free_end = b.free_run.states.back();
  const auto& npi_end = b.npi_run.states.back();
  EXPECT_GT(*std::min_element(free_end.begin(), free_end.end()), 0.05);
  EXPECT_LE(*std::max_element(npi_end.begin(), npi_end.end()), 0.05 + 1e-3);
  EXPECT_EQ(b.steady_free.kind, SteadyKind::kEndemic);
}

TEST(Comparison, ZeroInitialStateIsDegenerate) {
  const ExperimentConfig c;
  const std::vector<double> zero(100, 0.0);
  const ComparisonBundle b = run_comparison(c, 1, 0.05, std::nullopt, std::nullopt, zero);
  EXPECT_TRUE(b.degenerate);
  for (double v : b.free_run.states.back()) EXPECT_EQ(v, 0.0);
  for (double v : b.npi_run.states.back()) EXPECT_EQ(v, 0.0);
}

TEST(Sweep, ShapeAndLooserTargetsNeedLess) {
  const ExperimentConfig c = small_config();
  const SweepReport r = sweep(c, 1);
  ASSERT_EQ(r.rows.size(), c.thresholds.size() * c.seeds.size() * 2);
  std::map<std::pair<double, std::uint64_t>, std::size_t> greedy_clusters;
  for (const SweepRow& row : r.rows) {
    EXPECT_EQ(row.jbar, 0.0);
    EXPECT_LE(row.max_excess, 1e-9);
    EXPECT_EQ(row.bound_ratio.has_value(), row.method == Method::kGreedy);
    if (row.method == Method::kGreedy) greedy_clusters[{row.threshold, row.seed}] = row.clusters;
  }
  for (std::uint64_t s : c.seeds) {
    EXPECT_LT((greedy_clusters[{0.4, s}]), (greedy_clusters[{0.05, s}]));
  }
  EXPECT_TRUE(r.greedy_never_worse());
  EXPECT_EQ(r.cost_ratios().size(), c.thresholds.size() * c.seeds.size());
}

TEST(Sweep, JobCountDoesNotChangeOutput) {
  const ExperimentConfig c = small_config();
  EXPECT_EQ(io::sweep_to_csv(sweep(c, 1)), io::sweep_to_csv(sweep(c, 3)));
}

TEST(Io, NetworkRoundTrip) {
  const Instance inst = build_instance(ExperimentConfig{}, 2).instance;
  const Network back = io::network_from_json(io::network_to_json(inst.network));
  EXPECT_EQ(back, inst.network);
  const ClusterSet cs =
      io::clusters_from_json(io::clusters_to_json(inst.clusters), inst.network.n());
  EXPECT_EQ(cs, inst.clusters);
}

TEST(Io, NetworkJsonIsValidated) {
  const std::string bad =
      R"({"n": 3, "gamma": [0.4,0.4,0.4], "beta": [0.5,0.5,0.5],
          "edges": [[0, 1, 0.5]]})";
  try {
    io::network_from_json(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotConnected);
  }
}

TEST(Io, StrategyForms) {
  EXPECT_EQ(io::strategy_from_json("[2, 0]"), Strategy({0, 2}));
  EXPECT_EQ(io::strategy_from_json(R"({"selected": [1], "cost": 4})"), Strategy({1}));
  EXPECT_EQ(io::strategy_from_json(io::strategy_to_json(Strategy({4, 5}))), Strategy({4, 5}));
  EXPECT_THROW(io::strategy_from_json("{}"), Error);
}

TEST(Io, ConfigRoundTripAndStrictness) {
  ExperimentConfig c;
  c.thresholds = {0.1, 0.25};
  c.npi = NpiParams{0.3, 0.6, true};
  const ExperimentConfig back = io::config_from_json(io::config_to_json(c));
  EXPECT_EQ(back.thresholds, c.thresholds);
  EXPECT_EQ(back.npi.theta1, 0.3);
  EXPECT_TRUE(back.npi.relaxed);
  EXPECT_EQ(io::config_to_json(back), io::config_to_json(c));

  const auto code_of = [](const std::string& text) {
    try {
      io::config_from_json(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  EXPECT_EQ(code_of(R"({"thresholds": [0.1]})"), ErrorCode::kConfig);
  EXPECT_EQ(code_of(R"({"schema": 1, "bogus": 3})"), ErrorCode::kConfig);
  EXPECT_EQ(code_of(R"({"schema": 2})"), ErrorCode::kConfig);
  EXPECT_EQ(code_of("not json"), ErrorCode::kConfig);
  EXPECT_EQ(code_of(R"({"schema": 1, "network": {"n": 50, "q": 1}})"), ErrorCode::kConfig);
}

TEST(Io, TrajectoryCsv) {
  Trajectory t;
  t.times = {0.0, 1.0};
  t.states = {{0.5, 0.25}, {0.125, 1.0}};
  EXPECT_EQ(io::trajectory_to_csv(t), "t,x_0,x_1\n0,0.5,0.25\n1,0.125,1\n");
}

TEST(Io, FormatDoubleShortest) {
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(303.0), "303");
}
