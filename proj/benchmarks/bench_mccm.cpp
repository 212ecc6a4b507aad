#include <benchmark/benchmark.h>

#include <vector>

#include "mccm/choice_oracle.hpp"
#include "mccm/model.hpp"
#include "mccm/plan.hpp"
#include "mccm/recovery.hpp"
#include "mccm/rng.hpp"
#include "mccm/simulate.hpp"

using namespace mccm;

namespace {

Assortment half_assortment(int n) {
  std::vector<int> products;
  for (int i = 1; i <= n / 2; ++i) products.push_back(i);
  return Assortment(products);
}

void BM_AbsorptionSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ModelParams model = generate_random(n, 0.2, 42);
  const Assortment s = half_assortment(n);
  for (auto _ : state)
    benchmark::DoNotOptimize(absorption_probabilities(model, s));
}

void BM_ExactTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ModelParams model = generate_random(n, 0.2, 42);
  const RecoveryPlan plan = build_plan(n, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(exact_choice_table(model, plan.required_assortments));
}

void BM_Recover(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ModelParams model = generate_random(n, 0.2, 42);
  const RecoveryPlan plan = build_plan(n, 2);
  const ChoiceTable table = exact_choice_table(model, plan.required_assortments);
  for (auto _ : state)
    benchmark::DoNotOptimize(recover(table, plan));
}

void BM_SampleWalk(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ModelParams model = generate_random(n, 0.2, 42);
  const Assortment s = half_assortment(n);
  SplitMix64 rng(123);
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_purchase(model, s, rng));
  state.SetItemsProcessed(state.iterations());
}

void BM_EstimateTable(benchmark::State& state) {
  const int n = 8;
  const ModelParams model = generate_random(n, 0.2, 42);
  const RecoveryPlan plan = build_plan(n, 2);
  SampleConfig config;
  config.samples_per_assortment = state.range(0);
  config.seed = 7;
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_table(model, plan.required_assortments, config));
  state.SetItemsProcessed(state.iterations() * state.range(0) *
                          static_cast<long long>(plan.required_assortments.size()));
}

}  // namespace

BENCHMARK(BM_AbsorptionSolve)->Arg(10)->Arg(50)->Arg(200);
BENCHMARK(BM_ExactTable)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_Recover)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_SampleWalk)->Arg(10)->Arg(100);
BENCHMARK(BM_EstimateTable)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
