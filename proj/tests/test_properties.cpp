#include <gtest/gtest.h>

#include "npicover/properties.hpp"

using namespace npicover;
using namespace npicover::properties;

namespace {

Instance with_params(std::uint64_t seed, NpiParams npi) {
  RandomInstanceSpec spec;
  spec.clusters = 5;
  spec.npi = npi;
  return random_instance(seed, spec);
}

}  // namespace

TEST(SetFunctions, DefaultRegimeHasNoViolations) {
  SetFunctionReport rep;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Instance inst = with_params(seed, NpiParams{0.7, 0.9});
    const auto x = interesting_threshold(inst, 0.5);
    ASSERT_TRUE(x.has_value());
    check_exhaustive(CoverEvaluator(inst, Threshold::uniform(inst.network.n(), *x)), 1.0, rep);
  }
  for (const PropertyResult* r : rep.all()) {
    EXPECT_TRUE(r->passed()) << r->name << " violations " << r->violations;
  }
}

// Below 2 theta1 >= theta2 the pairwise rate is no longer supermodular,
// so the battery has to notice.
TEST(SetFunctions, NegativeControlDetectsBrokenRegime) {
  const NpiParams broken{0.2, 0.9, true};
  ASSERT_FALSE(supermodular_regime(broken));
  SetFunctionReport rep;
  const Instance inst = with_params(4, broken);
  check_exhaustive(CoverEvaluator(inst, Threshold::uniform(inst.network.n(), 0.3)), 1.0, rep);
  EXPECT_GT(rep.lambda_supermodular.violations, 0);
  EXPECT_GT(rep.j_supermodular.violations, 0);
  // Cost structure does not depend on theta.
  EXPECT_TRUE(rep.c1_modular.passed());
  EXPECT_TRUE(rep.c2_submodular.passed());
  EXPECT_TRUE(rep.c3_submodular.passed());
}

TEST(PropertyResult, RecordAndMerge) {
  PropertyResult a("a");
  EXPECT_FALSE(a.passed());
  a.record(-1.0, 0.0);
  EXPECT_TRUE(a.passed());
  PropertyResult b("b");
  b.record(0.5, 0.1);
  a.merge(b);
  EXPECT_EQ(a.checks, 2);
  EXPECT_EQ(a.violations, 1);
  EXPECT_DOUBLE_EQ(a.max_violation, 0.5);
}

TEST(Verification, QuickBatteryPasses) {
  for (const PropertyResult& r : run_verification({true, 1})) {
    EXPECT_TRUE(r.passed()) << r.name;
  }
}
