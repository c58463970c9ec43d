//
// Copyright 2026 The dpsprt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Serial reference harness against the OpenMP harness on the same plan.

#include <cstdlib>

#include "benchmark/benchmark.h"
#include "dpsprt/dp_sprt.h"
#include "dpsprt/harness.h"
#include "dpsprt/privsprt.h"

namespace dpsprt {
namespace {

ExperimentPlan BenchPlan(int64_t trials) {
  const HypothesisPair hyp = *HypothesisPair::Create(0.3, 0.7);
  ExperimentPlan plan{.instance = hyp,
                      .truth = Truth::kH0,
                      .n_trials = trials,
                      .master_seed = 1};
  plan.variants.push_back(
      {"laplace", *MakeTestConfig(hyp, 0.05, 0.05, LaplaceVariant{1.0})});
  plan.variants.push_back(
      {"laplace_sub",
       *MakeTestConfig(hyp, 0.05, 0.05,
                       LaplaceSubVariant{1.0, DefaultSubsamplingRate(1.0)})});
  PrivSprtConfig priv = PrivSprtConfig::ForEpsilon(hyp, 1.0);
  priv.thresh_a = 228;
  priv.thresh_b = 192;
  plan.variants.push_back({"privsprt", priv});
  return plan;
}

void BM_Serial(benchmark::State& state) {
  const ExperimentPlan plan = BenchPlan(state.range(0));
  for (auto _ : state) {
    auto results = RunExperimentSerial(plan);
    if (!results.ok()) std::abort();
    benchmark::DoNotOptimize(results->data());
  }
  state.SetItemsProcessed(state.iterations() * plan.n_trials *
                          static_cast<int64_t>(plan.variants.size()));
}
BENCHMARK(BM_Serial)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_OpenMp(benchmark::State& state) {
  const ExperimentPlan plan = BenchPlan(state.range(0));
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto results = RunExperiment(plan, workers);
    if (!results.ok()) std::abort();
    benchmark::DoNotOptimize(results->data());
  }
  state.SetItemsProcessed(state.iterations() * plan.n_trials *
                          static_cast<int64_t>(plan.variants.size()));
}
BENCHMARK(BM_OpenMp)
    ->Args({200, 1})
    ->Args({200, 2})
    ->Args({200, 4})
    ->Args({200, 8})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

}  // namespace
}  // namespace dpsprt

BENCHMARK_MAIN();
