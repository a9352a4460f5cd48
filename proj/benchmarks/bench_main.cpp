#include <benchmark/benchmark.h>

#include "npicover/covering.hpp"
#include "npicover/experiment.hpp"

using namespace npicover;

namespace {

const Instance& instance() {
  static const Instance inst = build_instance(ExperimentConfig{}, 1).instance;
  return inst;
}

void BM_JBar(benchmark::State& state) {
  const Instance& inst = instance();
  const CoverEvaluator eval(inst, Threshold::uniform(inst.network.n(), 0.05));
  const Strategy s({0, 3, 7, 12});
  for (auto _ : state) benchmark::DoNotOptimize(eval.j_bar(s));
}
BENCHMARK(BM_JBar);

void BM_Greedy(benchmark::State& state) {
  const Instance& inst = instance();
  const CoverEvaluator eval(inst, Threshold::uniform(inst.network.n(), 0.05));
  const auto weights = c1_weights(inst.clusters);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_cover(eval, weights));
}
BENCHMARK(BM_Greedy)->Unit(benchmark::kMicrosecond);

void BM_Baseline(benchmark::State& state) {
  const Instance& inst = instance();
  const CoverEvaluator eval(inst, Threshold::uniform(inst.network.n(), 0.05));
  for (auto _ : state) benchmark::DoNotOptimize(baseline_degree(eval));
}
BENCHMARK(BM_Baseline)->Unit(benchmark::kMicrosecond);

void BM_R0(benchmark::State& state) {
  const SisSystem sys = make_system(instance(), Strategy());
  for (auto _ : state) benchmark::DoNotOptimize(r0(sys));
}
BENCHMARK(BM_R0)->Unit(benchmark::kMicrosecond);

void BM_FixedPoint(benchmark::State& state) {
  const SisSystem sys = make_system(instance(), Strategy());
  for (auto _ : state) benchmark::DoNotOptimize(endemic_fixed_point(sys));
}
BENCHMARK(BM_FixedPoint)->Unit(benchmark::kMicrosecond);

void BM_PhiIteration(benchmark::State& state) {
  const SisSystem sys = make_system(instance(), Strategy());
  for (auto _ : state) benchmark::DoNotOptimize(endemic_phi_iteration(sys));
}
BENCHMARK(BM_PhiIteration)->Unit(benchmark::kMicrosecond);

void BM_Rk4(benchmark::State& state) {
  const SisSystem sys = make_system(instance(), Strategy());
  const std::vector<double> x0 = random_initial_state(sys.n(), 1);
  const IntegrateOptions opts{0.01, static_cast<double>(state.range(0)), 1000};
  for (auto _ : state) benchmark::DoNotOptimize(integrate(sys, x0, opts));
}
BENCHMARK(BM_Rk4)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
