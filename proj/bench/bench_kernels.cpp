// Serial reference loops against the OpenMP kernels on generated instances.
// Run: fuzzysched_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include "fuzzysched/allocate.hpp"
#include "fuzzysched/baseline.hpp"
#include "fuzzysched/generate.hpp"
#include "fuzzysched/rating.hpp"
#include "fuzzysched/retrograde.hpp"

using namespace fsched;

namespace {

Instance make(int jobs, int activities, int resources, double spread) {
  GenOptions g;
  g.jobs = jobs;
  g.activities_per_job = activities;
  g.resources = resources;
  g.max_capable = resources;
  g.spread = spread;
  g.seed = 42;
  return generate_instance(g);
}

Exec mode(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_BruteForce(benchmark::State& state) {
  const Instance inst = make(static_cast<int>(state.range(1)), 2, 2, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force(inst, kBruteForceLimit, mode(state)));
  label(state);
}
BENCHMARK(BM_BruteForce)->ArgsProduct({{0, 1}, {2, 3, 4}})->Unit(benchmark::kMillisecond);

void BM_BruteForceReference(benchmark::State& state) {
  const Instance inst = make(static_cast<int>(state.range(0)), 2, 2, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_reference(inst));
}
BENCHMARK(BM_BruteForceReference)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_BackwardPass(benchmark::State& state) {
  const Instance inst = make(static_cast<int>(state.range(1)), 5, 4, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(backward_pass(inst, mode(state)));
  label(state);
}
BENCHMARK(BM_BackwardPass)->ArgsProduct({{0, 1}, {100, 2000}});

void BM_Prioritize(benchmark::State& state) {
  const Instance inst = make(static_cast<int>(state.range(1)), 4, 4, 0.3);
  const Arrangement arr = backward_pass(inst, Exec::serial);
  std::vector<std::string> ids;
  for (const Activity& a : inst.activities()) ids.push_back(a.id);
  const Schedule empty;
  for (auto _ : state) {
    benchmark::DoNotOptimize(prioritize_jobs(ids, inst, arr, empty, default_rating_model().job, 0.0, mode(state)));
  }
  label(state);
}
BENCHMARK(BM_Prioritize)->ArgsProduct({{0, 1}, {50, 500}})->Unit(benchmark::kMicrosecond);

void BM_Run(benchmark::State& state) {
  const Instance inst = make(static_cast<int>(state.range(1)), 4, 5, 0.3);
  RunOptions opts;
  opts.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(run(inst, default_rating_model(), opts));
  label(state);
}
BENCHMARK(BM_Run)->ArgsProduct({{0, 1}, {20, 100}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
