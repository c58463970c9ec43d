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

#include "dpsprt/harness.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include <omp.h>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dpsprt {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// A plan variant with its test constructed once.
struct PreparedVariant {
  const PlanVariant* source = nullptr;
  uint32_t stream_id = 0;
  std::optional<DpSprt> test;  // Empty for the baseline.
  const PrivSprtConfig* baseline = nullptr;
};

uint32_t StreamIdFor(const PlanVariant& variant) {
  return VariantStreamId(variant.id.data(), variant.id.size());
}

const HypothesisPair& HypothesesOf(const PlanVariant& variant) {
  if (const auto* t = std::get_if<TestConfig>(&variant.config)) {
    return t->hypotheses;
  }
  return std::get<PrivSprtConfig>(variant.config).hypotheses;
}

absl::StatusOr<PreparedVariant> Prepare(const PlanVariant& variant) {
  PreparedVariant prepared{.source = &variant,
                           .stream_id = StreamIdFor(variant)};
  if (const auto* t = std::get_if<TestConfig>(&variant.config)) {
    absl::StatusOr<DpSprt> test = DpSprt::Create(*t);
    if (!test.ok()) return test.status();
    prepared.test.emplace(*std::move(test));
  } else {
    prepared.baseline = &std::get<PrivSprtConfig>(variant.config);
    if (absl::Status s = ValidatePrivSprtConfig(*prepared.baseline); !s.ok()) {
      return s;
    }
  }
  return prepared;
}

absl::StatusOr<TrialRecord> RunPrepared(const PreparedVariant& variant,
                                        double truth_p, uint64_t master_seed,
                                        uint32_t trial) {
  BernoulliStream obs =
      MakeBernoulliStream(truth_p, master_seed, variant.stream_id, trial);
  TrialStreams streams =
      TrialStreams::ForTrial(master_seed, variant.stream_id, trial);
  absl::StatusOr<TestOutcome> outcome =
      variant.test.has_value()
          ? variant.test->Run(obs.AsBitStream(), streams)
          : RunPrivSprt(*variant.baseline, obs.AsBitStream(), streams);
  if (!outcome.ok()) return outcome.status();
  return TrialRecord{
      .trial = trial,
      .tau = outcome->tau,
      .decision = outcome->decision,
      .exhausted = outcome->exhausted,
      .seed_lo = master_seed,
      .seed_hi = (static_cast<uint64_t>(variant.stream_id) << 32) | trial,
  };
}

absl::StatusOr<std::vector<PreparedVariant>> PrepareAll(
    const ExperimentPlan& plan) {
  if (absl::Status s = ValidatePlan(plan); !s.ok()) return s;
  std::vector<PreparedVariant> prepared;
  prepared.reserve(plan.variants.size());
  for (const PlanVariant& v : plan.variants) {
    absl::StatusOr<PreparedVariant> p = Prepare(v);
    if (!p.ok()) {
      return absl::Status(p.status().code(),
                          absl::StrFormat("variant '%s': %s", v.id,
                                          p.status().message()));
    }
    prepared.push_back(*std::move(p));
  }
  return prepared;
}

double TruthP(const ExperimentPlan& plan) {
  return plan.truth == Truth::kH0 ? plan.instance.h0().p()
                                  : plan.instance.h1().p();
}

absl::StatusOr<std::vector<VariantResult>> Collect(
    const ExperimentPlan& plan, const std::vector<PreparedVariant>& prepared,
    std::vector<absl::StatusOr<TrialRecord>>& records) {
  std::vector<VariantResult> results;
  results.reserve(prepared.size());
  const int64_t n = plan.n_trials;
  for (size_t v = 0; v < prepared.size(); ++v) {
    VariantResult result{.variant_id = prepared[v].source->id};
    result.trials.reserve(n);
    for (int64_t i = 0; i < n; ++i) {
      absl::StatusOr<TrialRecord>& record = records[v * n + i];
      if (!record.ok()) {
        return absl::Status(
            record.status().code(),
            absl::StrFormat("variant '%s' trial %d: %s", result.variant_id, i,
                            record.status().message()));
      }
      result.trials.push_back(*record);
    }
    result.stats = Aggregate(result.trials, plan.truth);
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace

const char* TruthName(Truth truth) { return truth == Truth::kH0 ? "H0" : "H1"; }

BernoulliStream MakeBernoulliStream(double p, uint64_t master_seed,
                                    uint32_t variant_id, uint32_t trial) {
  return BernoulliStream(
      p, RandomStream({master_seed, variant_id, trial, Substream::kObs}));
}

absl::StatusOr<VariantMeta> DescribeVariant(const PlanVariant& variant) {
  const HypothesisPair& hyp = HypothesesOf(variant);
  VariantMeta meta{.p0 = hyp.h0().p(), .p1 = hyp.h1().p()};
  if (const auto* t = std::get_if<TestConfig>(&variant.config)) {
    absl::StatusOr<DpSprt> test = DpSprt::Create(*t);
    if (!test.ok()) return test.status();
    meta.kind = VariantName(t->variant);
    meta.alpha = t->alpha;
    meta.beta = t->beta;
    meta.gamma = test->gamma_used();
    meta.epsilon = std::visit(
        [](const auto& v) -> double {
          if constexpr (requires { v.epsilon; }) {
            return v.epsilon;
          } else {
            return std::numeric_limits<double>::infinity();
          }
        },
        t->variant);
    meta.rate = test->rate();
    meta.kappa = test->correction_family() == NoiseFamily::kZero
                     ? kNaN
                     : test->correction().kappa;
    meta.horizon = t->horizon;
  } else {
    const auto& b = std::get<PrivSprtConfig>(variant.config);
    meta.kind = "privsprt";
    meta.alpha = b.alpha;
    meta.beta = b.beta;
    meta.gamma = kNaN;
    meta.epsilon = b.epsilon;
    meta.rate = 1.0;
    meta.kappa = kNaN;
    meta.horizon = b.horizon;
  }
  return meta;
}

double BatchStats::StandardError() const {
  return n_trials > 0 ? std::sqrt(var_tau / static_cast<double>(n_trials))
                      : kNaN;
}

double NearestRankPercentile(const std::vector<int64_t>& sorted, double q) {
  const double n = static_cast<double>(sorted.size());
  const int64_t rank =
      std::clamp<int64_t>(static_cast<int64_t>(std::ceil(q / 100.0 * n)), 1,
                          static_cast<int64_t>(sorted.size()));
  return static_cast<double>(sorted[rank - 1]);
}

BatchStats Aggregate(const std::vector<TrialRecord>& trials, Truth truth) {
  BatchStats stats;
  stats.n_trials = static_cast<int64_t>(trials.size());
  if (trials.empty()) {
    stats.error_rate = stats.error_ci_halfwidth = kNaN;
    stats.mean_tau = stats.var_tau = kNaN;
    stats.tau_p5 = stats.tau_p50 = stats.tau_p95 = kNaN;
    return stats;
  }
  const int truth_bit = static_cast<int>(truth);
  int64_t wrong = 0;
  std::vector<int64_t> taus;
  taus.reserve(trials.size());
  double sum = 0.0;
  for (const TrialRecord& r : trials) {
    if (r.exhausted) {
      ++stats.n_exhausted;
    } else {
      ++stats.n_decided;
      if (r.decision != truth_bit) ++wrong;
    }
    taus.push_back(r.tau);
    sum += static_cast<double>(r.tau);
  }
  const double n = static_cast<double>(stats.n_trials);
  stats.mean_tau = sum / n;
  double ss = 0.0;
  for (const int64_t t : taus) {
    const double d = static_cast<double>(t) - stats.mean_tau;
    ss += d * d;
  }
  stats.var_tau = stats.n_trials > 1 ? ss / (n - 1.0) : 0.0;
  std::sort(taus.begin(), taus.end());
  stats.tau_p5 = NearestRankPercentile(taus, 5.0);
  stats.tau_p50 = NearestRankPercentile(taus, 50.0);
  stats.tau_p95 = NearestRankPercentile(taus, 95.0);
  if (stats.n_decided > 0) {
    const double decided = static_cast<double>(stats.n_decided);
    stats.error_rate = static_cast<double>(wrong) / decided;
    stats.error_ci_halfwidth = 1.96 * std::sqrt(stats.error_rate *
                                                (1.0 - stats.error_rate) /
                                                decided);
  } else {
    stats.error_rate = stats.error_ci_halfwidth = kNaN;
  }
  return stats;
}

double PooledStandardError(const BatchStats& a, const BatchStats& b) {
  return std::hypot(a.StandardError(), b.StandardError());
}

absl::Status ValidatePlan(const ExperimentPlan& plan) {
  if (plan.n_trials < 1 ||
      plan.n_trials > std::numeric_limits<uint32_t>::max()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("n_trials must lie in [1, 2^32), got %d",
                        plan.n_trials));
  }
  if (plan.variants.empty()) {
    return absl::InvalidArgumentError("the plan has no variants");
  }
  std::map<uint32_t, std::string> ids;
  for (const PlanVariant& v : plan.variants) {
    if (v.id.empty()) {
      return absl::InvalidArgumentError("variant ids must be nonempty");
    }
    const auto [it, inserted] = ids.emplace(StreamIdFor(v), v.id);
    if (!inserted) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "variant ids '%s' and '%s' map to the same random stream",
          it->second, v.id));
    }
    const HypothesisPair& hyp = HypothesesOf(v);
    if (hyp.h0().p() != plan.instance.h0().p() ||
        hyp.h1().p() != plan.instance.h1().p()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "variant '%s' tests (%g, %g) but the plan instance is (%g, %g)",
          v.id, hyp.h0().p(), hyp.h1().p(), plan.instance.h0().p(),
          plan.instance.h1().p()));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<TrialRecord> RunTrial(const PlanVariant& variant,
                                     double truth_p, uint64_t master_seed,
                                     uint32_t trial) {
  absl::StatusOr<PreparedVariant> prepared = Prepare(variant);
  if (!prepared.ok()) return prepared.status();
  return RunPrepared(*prepared, truth_p, master_seed, trial);
}

absl::StatusOr<std::vector<VariantResult>> RunExperiment(
    const ExperimentPlan& plan, int workers) {
  absl::StatusOr<std::vector<PreparedVariant>> prepared = PrepareAll(plan);
  if (!prepared.ok()) return prepared.status();
  const int64_t n = plan.n_trials;
  const int64_t total = n * static_cast<int64_t>(prepared->size());
  const double truth_p = TruthP(plan);
  std::vector<absl::StatusOr<TrialRecord>> records(total);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (int64_t k = 0; k < total; ++k) {
    records[k] = RunPrepared((*prepared)[k / n], truth_p, plan.master_seed,
                             static_cast<uint32_t>(k % n));
  }
  return Collect(plan, *prepared, records);
}

absl::StatusOr<std::vector<VariantResult>> RunExperimentSerial(
    const ExperimentPlan& plan) {
  absl::StatusOr<std::vector<PreparedVariant>> prepared = PrepareAll(plan);
  if (!prepared.ok()) return prepared.status();
  const int64_t n = plan.n_trials;
  const double truth_p = TruthP(plan);
  std::vector<absl::StatusOr<TrialRecord>> records;
  records.reserve(n * prepared->size());
  for (const PreparedVariant& v : *prepared) {
    for (int64_t i = 0; i < n; ++i) {
      records.push_back(RunPrepared(v, truth_p, plan.master_seed,
                                    static_cast<uint32_t>(i)));
    }
  }
  return Collect(plan, *prepared, records);
}

}  // namespace dpsprt
