#include <benchmark/benchmark.h>

#include <random>

#include "dagcast/capacity.hpp"
#include "dagcast/multiclass.hpp"
#include "dagcast/policy.hpp"
#include "dagcast/scenarios.hpp"
#include "dagcast/sim.hpp"
#include "dagcast/trees.hpp"

namespace {

using namespace dagcast;

void BM_EnumerateMatchings(benchmark::State& state) {
  const Scenario& mesh = scenario("mesh10");
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_activations(mesh.network, mesh.limits).size());
}
BENCHMARK(BM_EnumerateMatchings)->Unit(benchmark::kMillisecond);

void BM_MaxWeightScanMesh10(benchmark::State& state) {
  const Scenario& mesh = scenario("mesh10");
  const ActivationSet acts = enumerate_activations(mesh.network, mesh.limits);
  std::mt19937_64 gen(1);
  std::uniform_int_distribution<std::int64_t> dist(0, 100);
  std::vector<std::int64_t> scores(45);
  for (auto& s : scores) s = dist(gen);
  for (auto _ : state) benchmark::DoNotOptimize(best_activation(scores, acts).weight);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(acts.size()));
}
BENCHMARK(BM_MaxWeightScanMesh10);

void BM_LambdaDag(benchmark::State& state) {
  const Scenario& s = scenario(state.range(0) == 0 ? "k4" : "mesh10");
  for (auto _ : state) benchmark::DoNotOptimize(lambda_dag(s.network, s.limits).lambda);
}
BENCHMARK(BM_LambdaDag)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_CountArborescencesMesh10(benchmark::State& state) {
  const Network& net = scenario("mesh10").network;
  for (auto _ : state) benchmark::DoNotOptimize(count_arborescences(net));
}
BENCHMARK(BM_CountArborescencesMesh10);

void BM_SimulateSlots(benchmark::State& state) {
  const char* name = state.range(0) == 0 ? "k4" : "mesh10";
  const Scenario& s = scenario(name);
  RunOptions options;
  options.limits = s.limits;
  constexpr std::int64_t kSlots = 2000;
  for (auto _ : state) benchmark::DoNotOptimize(run(s.network, PiStarPolicy{}, 0.4, kSlots, 1, options).throughput);
  state.SetItemsProcessed(state.iterations() * kSlots);
  state.SetLabel(name);
}
BENCHMARK(BM_SimulateSlots)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MulticlassSlotsCycle4(benchmark::State& state) {
  const Network& net = scenario("cycle4").network;
  const MulticlassPolicy policy{static_cast<int>(state.range(0)), {}};
  constexpr std::int64_t kSlots = 2000;
  for (auto _ : state) benchmark::DoNotOptimize(run(net, policy, 1.5, kSlots, 1).throughput);
  state.SetItemsProcessed(state.iterations() * kSlots);
}
BENCHMARK(BM_MulticlassSlotsCycle4)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
