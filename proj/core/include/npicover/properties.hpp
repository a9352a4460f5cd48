#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "npicover/covering.hpp"
#include "npicover/experiment.hpp"

// Executable checks of the structural facts the optimizer relies on:
// monotonicity and supermodularity of the edge rates, J_i and J-bar,
// submodularity of the costs, monotonicity of the endemic state in the
// rates, agreement of the three steady-state routes, the greedy cover bound,
// and the sufficiency of J_i <= 0.
namespace npicover::properties {

struct PropertyResult {
  std::string name;
  long checks = 0;
  long violations = 0;
  double max_violation = 0.0;  // largest excess over the bound seen
  double seconds = 0.0;

  explicit PropertyResult(std::string n = {}) : name(std::move(n)) {}

  // Records one check whose bound is exceeded by `excess` (<= 0 when it
  // holds); more than `tol` counts as a violation.
  void record(double excess, double tol);
  void merge(const PropertyResult& other);
  bool passed() const { return checks > 0 && violations == 0; }
};

// Small connected random instance. Every node belongs to at least one
// cluster; cluster costs are drawn from {1,2,3,4}.
struct RandomInstanceSpec {
  NodeId n_min = 6;
  NodeId n_max = 30;
  ClusterId clusters = 5;
  double extra_membership = 0.15;  // chance a node joins each other cluster
  NpiParams npi;
};

Instance random_instance(std::uint64_t seed, const RandomInstanceSpec& spec);

// Uniform threshold strictly between "nothing needed" and "everything
// selected" for this instance, or nullopt when no such value exists.
std::optional<double> interesting_threshold(const Instance& instance,
                                            double position);

struct SetFunctionReport {
  PropertyResult lambda_nonincreasing{"lambda nonincreasing"};
  PropertyResult lambda_supermodular{"lambda supermodular"};
  PropertyResult j_nonincreasing{"J_i nonincreasing"};
  PropertyResult j_supermodular{"J_i supermodular"};
  PropertyResult jbar_nonincreasing{"J-bar nonincreasing"};
  PropertyResult jbar_supermodular{"J-bar supermodular"};
  PropertyResult c1_modular{"C1 modular"};
  PropertyResult c2_nondecreasing{"C2 nondecreasing"};
  PropertyResult c2_submodular{"C2 submodular"};
  PropertyResult c3_nondecreasing{"C3 nondecreasing"};
  PropertyResult c3_submodular{"C3 submodular"};

  std::vector<PropertyResult*> all();
  std::vector<const PropertyResult*> all() const;
};

inline constexpr double kSetFunctionTol = 1e-12;

// One (S1 subset-of S2, w not in S2) triple against every set function.
void check_triple(const CoverEvaluator& eval, double c0, const Strategy& s1,
                  const Strategy& s2, ClusterId w, SetFunctionReport& report);
// Every triple; requires cluster_count() <= 12.
void check_exhaustive(const CoverEvaluator& eval, double c0,
                      SetFunctionReport& report);
void check_random_triples(const CoverEvaluator& eval, double c0, int count,
                          std::uint64_t seed, SetFunctionReport& report);

struct SetFunctionBattery {
  int exhaustive_instances = 20;
  ClusterId exhaustive_clusters = 5;
  int large_instances = 4;
  int triples = 1000;  // spread over the large instances
  ClusterId large_clusters = 25;
  std::uint64_t seed = 1;
};

SetFunctionReport run_set_function_battery(const SetFunctionBattery& b);

struct AgreementOptions {
  int graphs = 50;
  NodeId n_min = 5;
  NodeId n_max = 50;
  double t_end = 500.0;
  double dt = 0.01;
  double tol = 1e-4;
  double r0_floor = 1.0 + kNearCriticalMargin;
  std::uint64_t seed = 2;
};

// Max-norm gaps between the fixed-point, phi and RK4 steady states.
PropertyResult solver_cross_agreement(const AgreementOptions& options);

struct MonotonicityReport {
  PropertyResult fixed_point{"x*(lambda) <= x*(lambda-bar), fixed point"};
  PropertyResult phi{"x*(lambda) <= x*(lambda-bar), phi iteration"};
  PropertyResult phi_levels{"phi^l(lambda) <= phi^l(lambda-bar)"};
  int subcritical_pairs = 0;  // pairs where R0(lambda) < 1
};

// Random pairs lambda <= lambda-bar (entrywise inflation of a random rate
// matrix), checked componentwise within tol.
MonotonicityReport steady_state_monotonicity(int pairs, std::uint64_t seed,
                                             double tol = 1e-9);

struct BoundReport {
  PropertyResult bound{"greedy/optimal <= 1 + ln(J(0)/J(S-hat))"};
  PropertyResult trace{"greedy trace J-bar strictly decreasing"};
  PropertyResult optimal_not_worse{"brute force <= greedy"};
};

BoundReport greedy_bound(int instances, ClusterId max_clusters,
                         std::uint64_t seed);

// Greedy strategies on generated instances: endemic x* <= x_hat + 1e-9.
PropertyResult sufficiency_end_to_end(const ExperimentConfig& config,
                                      std::span<const std::uint64_t> seeds);

// All recorded RK4 states inside [0,1]^n and no clamping at dt = 0.01.
PropertyResult state_box_invariance(const ExperimentConfig& config,
                                    std::span<const std::uint64_t> seeds,
                                    double t_end);

// R0 <= 1 dies out (terminal max < 1e-3); R0 > 1.05 stays endemic
// (terminal min > 1e-6).
PropertyResult threshold_dichotomy(int runs, std::uint64_t seed,
                                   double t_end = 500.0);

struct VerifyOptions {
  bool quick = false;
  std::uint64_t seed = 1;
};

std::vector<PropertyResult> run_verification(const VerifyOptions& options);

}  // namespace npicover::properties
