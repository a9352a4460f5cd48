#include "npicover/properties.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "npicover/rng.hpp"

namespace npicover::properties {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

constexpr double kCostChoices[] = {1.0, 2.0, 3.0, 4.0};

Network random_network(Rng& rng, NodeId n_min, NodeId n_max) {
  const auto n = static_cast<NodeId>(rng.between(n_min, n_max));
  const int k = n > 4 && rng.bernoulli(0.5) ? 4 : 2;
  const double p = rng.uniform(0.0, 0.5);
  const std::uint64_t s = rng.next();
  return random_parameters(watts_strogatz(n, k, p, s), {0.3, 0.6}, {0.3, 0.8},
                           {0.3, 1.0}, s);
}

// Rescales every rate so that R0 equals `target`.
SisSystem with_r0(const SisSystem& sys, double target) {
  const double scale = target / r0(sys);
  std::vector<double> v = sys.rates.values();
  for (double& x : v) x *= scale;
  return SisSystem{sys.gamma, RateMatrix(sys.rates.shared_pattern(), std::move(v))};
}

double max_gap(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

void PropertyResult::record(double excess, double tol) {
  ++checks;
  if (excess > tol) ++violations;
  max_violation = std::max(max_violation, excess);
}

void PropertyResult::merge(const PropertyResult& other) {
  checks += other.checks;
  violations += other.violations;
  max_violation = std::max(max_violation, other.max_violation);
  seconds += other.seconds;
}

Instance random_instance(std::uint64_t seed, const RandomInstanceSpec& spec) {
  Rng rng(derive_seed(seed, Stream::kProperty));
  Network net = random_network(rng, spec.n_min, spec.n_max);
  const ClusterId m = spec.clusters;
  std::vector<std::vector<NodeId>> members(m);
  for (NodeId i = 0; i < net.n(); ++i) {
    const auto home = static_cast<ClusterId>(rng.below(m));
    for (ClusterId r = 0; r < m; ++r) {
      if (r == home || rng.bernoulli(spec.extra_membership)) members[r].push_back(i);
    }
  }
  for (auto& c : members) {
    if (c.empty()) c.push_back(static_cast<NodeId>(rng.below(net.n())));
  }
  std::vector<double> c1(m);
  std::vector<double> c2(m);
  for (ClusterId r = 0; r < m; ++r) {
    c1[r] = kCostChoices[rng.below(4)];
    c2[r] = kCostChoices[rng.below(4)];
  }
  return Instance{std::move(net), ClusterSet(std::move(members), c1, c2), spec.npi};
}

std::optional<double> interesting_threshold(const Instance& instance,
                                            double position) {
  // With a uniform x_hat = t, J_i <= 0 iff t >= 1 - gamma_i / d_i.
  const auto needed = [&](const Strategy& s) {
    const RateMatrix rates = lambda_matrix(instance.network, instance.npi,
                                           instance.clusters, s);
    double t = 0.0;
    for (NodeId i = 0; i < instance.network.n(); ++i) {
      const double d = rates.row_sum(i);
      if (d > 0.0) t = std::max(t, 1.0 - instance.network.gamma()[i] / d);
    }
    return t;
  };
  std::vector<ClusterId> ids(instance.clusters.size());
  std::iota(ids.begin(), ids.end(), 0);
  const double t_all = needed(Strategy(ids));
  const double t_none = needed(Strategy{});
  if (!(t_none - t_all > 1e-3)) return std::nullopt;
  return t_all + position * (t_none - t_all);
}

std::vector<PropertyResult*> SetFunctionReport::all() {
  return {&lambda_nonincreasing, &lambda_supermodular, &j_nonincreasing,
          &j_supermodular,       &jbar_nonincreasing,  &jbar_supermodular,
          &c1_modular,           &c2_nondecreasing,    &c2_submodular,
          &c3_nondecreasing,     &c3_submodular};
}

std::vector<const PropertyResult*> SetFunctionReport::all() const {
  auto mut = const_cast<SetFunctionReport*>(this)->all();
  return {mut.begin(), mut.end()};
}

void check_triple(const CoverEvaluator& eval, double c0, const Strategy& s1,
                  const Strategy& s2, ClusterId w, SetFunctionReport& rep) {
  const Instance& inst = eval.instance();
  const Strategy s1w = s1.with(w);
  const Strategy s2w = s2.with(w);
  const NodeSet v1 = eval.covered(s1);
  const NodeSet v1w = eval.covered(s1w);
  const NodeSet v2 = eval.covered(s2);
  const NodeSet v2w = eval.covered(s2w);

  const auto lam = [&](const NodeSet& v) {
    return lambda_matrix(inst.network, inst.npi, v).values();
  };
  const auto l1 = lam(v1), l1w = lam(v1w), l2 = lam(v2), l2w = lam(v2w);
  for (std::size_t k = 0; k < l1.size(); ++k) {
    rep.lambda_nonincreasing.record(l2[k] - l1[k], kSetFunctionTol);
    rep.lambda_nonincreasing.record(l1w[k] - l1[k], kSetFunctionTol);
    rep.lambda_supermodular.record((l1w[k] - l1[k]) - (l2w[k] - l2[k]),
                                   kSetFunctionTol);
  }

  double jb1 = 0, jb1w = 0, jb2 = 0, jb2w = 0;
  for (NodeId i = 0; i < inst.network.n(); ++i) {
    const double a = eval.j_i(v1, i), aw = eval.j_i(v1w, i);
    const double b = eval.j_i(v2, i), bw = eval.j_i(v2w, i);
    rep.j_nonincreasing.record(b - a, kSetFunctionTol);
    rep.j_nonincreasing.record(aw - a, kSetFunctionTol);
    rep.j_supermodular.record((aw - a) - (bw - b), kSetFunctionTol);
    jb1 += std::max(a, 0.0);
    jb1w += std::max(aw, 0.0);
    jb2 += std::max(b, 0.0);
    jb2w += std::max(bw, 0.0);
  }
  rep.jbar_nonincreasing.record(jb2 - jb1, kSetFunctionTol);
  rep.jbar_nonincreasing.record(jb1w - jb1, kSetFunctionTol);
  rep.jbar_supermodular.record((jb1w - jb1) - (jb2w - jb2), kSetFunctionTol);

  const ClusterSet& cs = inst.clusters;
  const double m1 = cost_c1(cs, s1w) - cost_c1(cs, s1);
  const double m2 = cost_c1(cs, s2w) - cost_c1(cs, s2);
  rep.c1_modular.record(std::abs(m1 - m2), 0.0);

  const double c2_1 = cost_c2(cs, s1), c2_2 = cost_c2(cs, s2);
  rep.c2_nondecreasing.record(c2_1 - c2_2, kSetFunctionTol);
  rep.c2_submodular.record((cost_c2(cs, s2w) - c2_2) - (cost_c2(cs, s1w) - c2_1),
                           kSetFunctionTol);
  const double c3_1 = cost_c3(cs, s1, c0), c3_2 = cost_c3(cs, s2, c0);
  rep.c3_nondecreasing.record(c3_1 - c3_2, kSetFunctionTol);
  rep.c3_submodular.record(
      (cost_c3(cs, s2w, c0) - c3_2) - (cost_c3(cs, s1w, c0) - c3_1),
      kSetFunctionTol);
}

void check_exhaustive(const CoverEvaluator& eval, double c0,
                      SetFunctionReport& report) {
  const ClusterId m = eval.cluster_count();
  if (m > 12) {
    throw Error(ErrorCode::kTooManyClusters,
                "exhaustive set-function check is limited to 12 clusters");
  }
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  for (std::uint64_t big = 0; big <= full; ++big) {
    const Strategy s2 = Strategy::from_mask(big, m);
    // Walk every submask of `big`, including the empty set.
    for (std::uint64_t small = big;; small = (small - 1) & big) {
      const Strategy s1 = Strategy::from_mask(small, m);
      for (ClusterId w = 0; w < m; ++w) {
        if (!(big >> w & 1U)) check_triple(eval, c0, s1, s2, w, report);
      }
      if (small == 0) break;
    }
  }
}

void check_random_triples(const CoverEvaluator& eval, double c0, int count,
                          std::uint64_t seed, SetFunctionReport& report) {
  Rng rng(derive_seed(seed, Stream::kProperty, 1));
  const ClusterId m = eval.cluster_count();
  for (int done = 0; done < count;) {
    std::vector<ClusterId> big;
    std::vector<ClusterId> small;
    std::vector<ClusterId> rest;
    const double density = rng.uniform01();
    for (ClusterId r = 0; r < m; ++r) {
      if (rng.bernoulli(density)) {
        big.push_back(r);
        if (rng.bernoulli(0.5)) small.push_back(r);
      } else {
        rest.push_back(r);
      }
    }
    if (rest.empty()) continue;
    const ClusterId w = rest[rng.below(rest.size())];
    check_triple(eval, c0, Strategy(small), Strategy(big), w, report);
    ++done;
  }
}

SetFunctionReport run_set_function_battery(const SetFunctionBattery& b) {
  SetFunctionReport report;
  const auto start = Clock::now();
  // Cycle theta through the default regime and the 2*theta1 = theta2
  // boundary of the relaxed regime.
  const NpiParams thetas[] = {{0.7, 0.9, false}, {0.55, 0.95, false},
                              {0.3, 0.6, true}, {0.45, 0.9, true}};
  for (int k = 0; k < b.exhaustive_instances; ++k) {
    RandomInstanceSpec spec;
    spec.clusters = b.exhaustive_clusters;
    spec.n_max = 16;
    spec.npi = thetas[k % 4];
    const Instance inst = random_instance(derive_seed(b.seed, Stream::kProperty, k), spec);
    const double t = interesting_threshold(inst, 0.5).value_or(0.1);
    check_exhaustive(CoverEvaluator(inst, Threshold::uniform(inst.network.n(), t)),
                     1.5, report);
  }
  for (int k = 0; k < b.large_instances; ++k) {
    RandomInstanceSpec spec;
    spec.clusters = b.large_clusters;
    spec.n_min = 40;
    spec.n_max = 100;
    spec.extra_membership = 0.05;
    spec.npi = thetas[k % 4];
    const auto seed = derive_seed(b.seed, Stream::kProperty, 1000 + k);
    const Instance inst = random_instance(seed, spec);
    const double t = interesting_threshold(inst, 0.5).value_or(0.1);
    const int share = b.triples / b.large_instances +
                      (k < b.triples % b.large_instances ? 1 : 0);
    check_random_triples(
        CoverEvaluator(inst, Threshold::uniform(inst.network.n(), t)), 1.5,
        share, seed, report);
  }
  const double secs = elapsed(start);
  for (auto* p : report.all()) p->seconds = secs;
  return report;
}

PropertyResult solver_cross_agreement(const AgreementOptions& o) {
  PropertyResult result("solver cross-agreement (fixed point, phi, RK4)");
  const auto start = Clock::now();
  Rng rng(derive_seed(o.seed, Stream::kProperty, 2));
  int accepted = 0;
  for (int attempt = 0; accepted < o.graphs && attempt < 50 * o.graphs; ++attempt) {
    const Network net = random_network(rng, o.n_min, o.n_max);
    const SisSystem sys{net.gamma(), lambda_matrix(net, NpiParams{}, NodeSet(net.n()))};
    if (r0(sys) <= o.r0_floor) continue;
    ++accepted;
    const SteadyState fp = endemic_fixed_point(sys);
    const SteadyState phi = endemic_phi_iteration(sys);
    const std::vector<double> x0(net.n(), 0.5);
    const Trajectory traj =
        integrate(sys, x0, IntegrateOptions{o.dt, o.t_end, 1'000'000});
    const auto& ode = traj.states.back();
    result.record(max_gap(fp.x_star, phi.x_star), o.tol);
    result.record(max_gap(fp.x_star, ode), o.tol);
    result.record(max_gap(phi.x_star, ode), o.tol);
  }
  if (accepted < o.graphs) ++result.violations;
  result.seconds = elapsed(start);
  return result;
}

MonotonicityReport steady_state_monotonicity(int pairs, std::uint64_t seed,
                                             double tol) {
  MonotonicityReport rep;
  const auto start = Clock::now();
  Rng rng(derive_seed(seed, Stream::kProperty, 3));
  for (int k = 0; k < pairs; ++k) {
    const Network net = random_network(rng, 5, 30);
    const SisSystem base{net.gamma(), lambda_matrix(net, NpiParams{}, NodeSet(net.n()))};
    const SisSystem low = with_r0(base, rng.uniform(0.6, 2.5));
    std::vector<double> inflated = low.rates.values();
    for (double& v : inflated) {
      if (rng.bernoulli(0.7)) v *= 1.0 + rng.uniform01();
    }
    const SisSystem high{low.gamma,
                         RateMatrix(low.rates.shared_pattern(), std::move(inflated))};

    const SteadyState fp_low = endemic_fixed_point(low);
    const SteadyState fp_high = endemic_fixed_point(high);
    if (fp_low.r0 < 1.0) ++rep.subcritical_pairs;
    for (NodeId i = 0; i < net.n(); ++i) {
      rep.fixed_point.record(fp_low.x_star[i] - fp_high.x_star[i], tol);
    }
    // The phi route needs R0 >= 1; below threshold x* = 0.
    const auto phi_state = [](const SisSystem& sys, const SteadyState& fp) {
      return fp.r0 >= 1.0 ? endemic_phi_iteration(sys).x_star
                          : std::vector<double>(sys.n(), 0.0);
    };
    const auto phi_low = phi_state(low, fp_low);
    const auto phi_high = phi_state(high, fp_high);
    for (NodeId i = 0; i < net.n(); ++i) {
      rep.phi.record(phi_low[i] - phi_high[i], tol);
    }
    const auto seq_low = phi_sequence(low, 25);
    const auto seq_high = phi_sequence(high, 25);
    for (std::size_t l = 0; l < seq_low.size(); ++l) {
      for (NodeId i = 0; i < net.n(); ++i) {
        rep.phi_levels.record(seq_low[l][i] - seq_high[l][i], tol);
      }
    }
  }
  const double secs = elapsed(start);
  rep.fixed_point.seconds = rep.phi.seconds = rep.phi_levels.seconds = secs;
  return rep;
}

BoundReport greedy_bound(int instances, ClusterId max_clusters,
                         std::uint64_t seed) {
  BoundReport rep;
  const auto start = Clock::now();
  Rng rng(derive_seed(seed, Stream::kProperty, 4));
  int accepted = 0;
  for (int attempt = 0; accepted < instances && attempt < 50 * instances; ++attempt) {
    RandomInstanceSpec spec;
    spec.n_min = 6;
    spec.n_max = 25;
    spec.clusters = static_cast<ClusterId>(rng.between(3, max_clusters));
    const Instance inst = random_instance(rng.next(), spec);
    const auto t = interesting_threshold(inst, rng.uniform(0.05, 0.9));
    if (!t) continue;
    ++accepted;
    const CoverEvaluator eval(inst, Threshold::uniform(inst.network.n(), *t));
    const auto weights = c1_weights(inst.clusters);
    const GreedyResult g = greedy_cover(eval, weights);
    const CoverSolution opt = brute_force_cover(eval, weights);
    rep.bound.record(g.cost / opt.cost - g.bound_ratio, 1e-12);
    rep.optimal_not_worse.record(opt.cost - g.cost, 0.0);
    double before = g.jbar_initial;
    for (const GreedyStep& step : g.trace) {
      // Strict decrease: any excess >= 0 is a violation.
      rep.trace.record(step.jbar_after - before,
                       -std::numeric_limits<double>::denorm_min());
      before = step.jbar_after;
    }
  }
  if (accepted < instances) ++rep.bound.violations;
  const double secs = elapsed(start);
  rep.bound.seconds = rep.trace.seconds = rep.optimal_not_worse.seconds = secs;
  return rep;
}

PropertyResult sufficiency_end_to_end(const ExperimentConfig& config,
                                      std::span<const std::uint64_t> seeds) {
  PropertyResult result("J_i <= 0 implies x* <= x_hat (greedy strategies)");
  const auto start = Clock::now();
  for (std::uint64_t seed : seeds) {
    const BuiltInstance built = build_instance(config, seed);
    const auto weights = c1_weights(built.instance.clusters);
    for (double t : config.thresholds) {
      const CoverEvaluator eval(built.instance,
                                Threshold::uniform(built.instance.network.n(), t));
      const GreedyResult g = greedy_cover(eval, weights);
      const SteadyState ss = endemic_fixed_point(
          make_system(built.instance, g.strategy), config.dynamics.solver_options());
      double excess = -INFINITY;
      for (double x : ss.x_star) excess = std::max(excess, x - t);
      result.record(excess, kSufficiencySlack);
    }
  }
  result.seconds = elapsed(start);
  return result;
}

PropertyResult state_box_invariance(const ExperimentConfig& config,
                                    std::span<const std::uint64_t> seeds,
                                    double t_end) {
  PropertyResult result("RK4 states stay in [0,1]^n, no clamping");
  const auto start = Clock::now();
  const double tightest =
      *std::min_element(config.thresholds.begin(), config.thresholds.end());
  for (std::uint64_t seed : seeds) {
    const BuiltInstance built = build_instance(config, seed);
    const Instance& inst = built.instance;
    const GreedyResult g = greedy_cover(
        inst, Threshold::uniform(inst.network.n(), tightest), c1_weights(inst.clusters));
    const auto x0 = random_initial_state(inst.network.n(), seed);
    IntegrateOptions opts = config.dynamics.integrate_options();
    opts.dt = 0.01;
    opts.t_end = t_end;
    opts.sample_stride = 1;
    for (const Strategy& s : {Strategy{}, g.strategy}) {
      const Trajectory traj = integrate(make_system(inst, s), x0, opts);
      double excess = -INFINITY;
      for (const auto& state : traj.states) {
        for (double x : state) excess = std::max({excess, -x, x - 1.0});
      }
      result.record(excess, 0.0);
      result.record(static_cast<double>(traj.clamp_count), 0.0);
    }
  }
  result.seconds = elapsed(start);
  return result;
}

PropertyResult threshold_dichotomy(int runs, std::uint64_t seed, double t_end) {
  PropertyResult result("R0 <= 1 dies out, R0 > 1.05 stays endemic");
  const auto start = Clock::now();
  Rng rng(derive_seed(seed, Stream::kProperty, 5));
  for (int k = 0; k < runs; ++k) {
    const Network net = random_network(rng, 5, 40);
    const SisSystem base{net.gamma(), lambda_matrix(net, NpiParams{}, NodeSet(net.n()))};
    const bool sub = k % 2 == 0;
    const SisSystem sys =
        with_r0(base, sub ? rng.uniform(0.3, 0.95) : rng.uniform(1.1, 3.0));
    std::vector<double> x0(net.n());
    for (double& x : x0) x = rng.uniform(0.01, 1.0);
    const Trajectory traj =
        integrate(sys, x0, IntegrateOptions{0.01, t_end, 1'000'000});
    const auto& end = traj.states.back();
    if (sub) {
      result.record(*std::max_element(end.begin(), end.end()) - 1e-3, 0.0);
    } else {
      result.record(1e-6 - *std::min_element(end.begin(), end.end()), 0.0);
    }
  }
  result.seconds = elapsed(start);
  return result;
}

std::vector<PropertyResult> run_verification(const VerifyOptions& options) {
  const bool quick = options.quick;
  const std::uint64_t seed = options.seed;
  std::vector<PropertyResult> out;

  SetFunctionBattery battery;
  battery.seed = seed;
  if (quick) {
    battery.exhaustive_instances = 8;
    battery.large_instances = 2;
    battery.triples = 200;
  }
  const SetFunctionReport sf = run_set_function_battery(battery);
  for (const auto* p : sf.all()) out.push_back(*p);

  AgreementOptions agree;
  agree.seed = seed;
  if (quick) {
    agree.graphs = 10;
    agree.n_max = 25;
  }
  out.push_back(solver_cross_agreement(agree));

  const MonotonicityReport mono = steady_state_monotonicity(quick ? 30 : 100, seed);
  out.push_back(mono.fixed_point);
  out.push_back(mono.phi);
  out.push_back(mono.phi_levels);

  const BoundReport bound = greedy_bound(quick ? 10 : 30, quick ? 8 : 10, seed);
  out.push_back(bound.bound);
  out.push_back(bound.optimal_not_worse);
  out.push_back(bound.trace);

  ExperimentConfig config;
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < (quick ? 3 : 20); ++k) seeds.push_back(seed * 1000 + k);
  out.push_back(sufficiency_end_to_end(config, seeds));
  out.push_back(state_box_invariance(
      config, std::span(seeds).first(1), quick ? 50.0 : 200.0));
  out.push_back(threshold_dichotomy(quick ? 6 : 20, seed));
  return out;
}

}  // namespace npicover::properties
