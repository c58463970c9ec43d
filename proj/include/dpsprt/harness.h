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

#ifndef DPSPRT_HARNESS_H_
#define DPSPRT_HARNESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "dpsprt/dp_sprt.h"
#include "dpsprt/exp_family.h"
#include "dpsprt/privsprt.h"
#include "dpsprt/rng.h"

namespace dpsprt {

enum class Truth { kH0 = 0, kH1 = 1 };

const char* TruthName(Truth truth);

// I.i.d. Bernoulli(p) bits drawn from one random stream.
class BernoulliStream {
 public:
  BernoulliStream(double p, RandomStream rng) : p_(p), rng_(rng) {}

  int Next() { return rng_.NextDouble() < p_ ? 1 : 0; }
  BitStream AsBitStream() {
    return [this]() -> std::optional<int> { return Next(); };
  }

 private:
  double p_;
  RandomStream rng_;
};

// Observation stream for `trial` of the variant with stream id `variant_id`.
BernoulliStream MakeBernoulliStream(double p, uint64_t master_seed,
                                    uint32_t variant_id, uint32_t trial);

struct PlanVariant {
  // Label written to the CSVs; also keys the variant's random streams.
  std::string id;
  std::variant<TestConfig, PrivSprtConfig> config;
};

// Per-variant parameters echoed into result rows. Fields that do not apply
// to a variant are NaN.
struct VariantMeta {
  std::string kind;  // VariantName() or "privsprt".
  double p0 = 0.0;
  double p1 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double epsilon = 0.0;
  double rate = 0.0;
  double kappa = 0.0;
  int64_t horizon = 0;
};

absl::StatusOr<VariantMeta> DescribeVariant(const PlanVariant& variant);

struct ExperimentPlan {
  HypothesisPair instance;
  Truth truth = Truth::kH0;
  std::vector<PlanVariant> variants;
  int64_t n_trials = 1000;
  uint64_t master_seed = 0;
};

struct TrialRecord {
  uint32_t trial = 0;
  int64_t tau = 0;
  std::optional<int> decision;
  bool exhausted = false;
  // The trial's streams are keyed by (seed_lo, seed_hi >> 32,
  // seed_hi & 0xffffffff) = (master_seed, variant stream id, trial).
  uint64_t seed_lo = 0;
  uint64_t seed_hi = 0;
};

struct BatchStats {
  int64_t n_trials = 0;
  int64_t n_exhausted = 0;
  int64_t n_decided = 0;
  // Fraction of decided trials whose decision differs from the truth; NaN
  // when nothing was decided.
  double error_rate = 0.0;
  // 1.96 sqrt(r (1 - r) / n_decided).
  double error_ci_halfwidth = 0.0;
  // Stopping-time moments and nearest-rank percentiles over all trials; an
  // exhausted trial contributes its horizon.
  double mean_tau = 0.0;
  double var_tau = 0.0;  // Unbiased sample variance.
  double tau_p5 = 0.0;
  double tau_p50 = 0.0;
  double tau_p95 = 0.0;

  double StandardError() const;
};

struct VariantResult {
  std::string variant_id;
  BatchStats stats;
  std::vector<TrialRecord> trials;
};

// Nearest-rank percentile of `sorted` (ascending, non-empty), q in (0, 100].
double NearestRankPercentile(const std::vector<int64_t>& sorted, double q);

BatchStats Aggregate(const std::vector<TrialRecord>& trials, Truth truth);

// sqrt(se_a^2 + se_b^2) for two independent batch means.
double PooledStandardError(const BatchStats& a, const BatchStats& b);

absl::Status ValidatePlan(const ExperimentPlan& plan);

// Runs every variant of the plan. Trials run in parallel on `workers` OpenMP
// threads (0 = runtime default); results do not depend on the worker count.
absl::StatusOr<std::vector<VariantResult>> RunExperiment(
    const ExperimentPlan& plan, int workers = 0);

// Serial reference implementation of RunExperiment.
absl::StatusOr<std::vector<VariantResult>> RunExperimentSerial(
    const ExperimentPlan& plan);

// Runs one trial. Pure function of its arguments.
absl::StatusOr<TrialRecord> RunTrial(const PlanVariant& variant,
                                     double truth_p, uint64_t master_seed,
                                     uint32_t trial);

}  // namespace dpsprt

#endif  // DPSPRT_HARNESS_H_
