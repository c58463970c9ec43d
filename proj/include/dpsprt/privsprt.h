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

#ifndef DPSPRT_PRIVSPRT_H_
#define DPSPRT_PRIVSPRT_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "absl/status/statusor.h"
#include "dpsprt/dp_sprt.h"
#include "dpsprt/exp_family.h"
#include "dpsprt/noise.h"

namespace dpsprt {

// Baseline test on the noisy sum of truncated log-likelihood ratios.
struct PrivSprtConfig {
  HypothesisPair hypotheses;
  double trunc_a = 1.0;  // LLRs are clamped to [-trunc_a, trunc_a].
  // scale_y is the per-step sigma_2, scale_z the threshold sigma_1.
  NoiseSpec noise;
  double thresh_a = 1.0;  // Lower threshold -a.
  double thresh_b = 1.0;  // Upper threshold b.
  int64_t horizon = kDefaultHorizon;
  uint64_t seed = 0;
  // Nominal privacy level and error targets; reported, never used by the run.
  double epsilon = 0.0;
  double alpha = 0.05;
  double beta = 0.05;

  // sigma_1 = 2 sqrt(2) A sigma_Z and sigma_2 = 2 sqrt(2) A sigma_Y with the
  // Gaussian scales of GaussianForEpsilonDelta(epsilon, delta) and A = 1.
  // Thresholds are left at 1 and must be calibrated.
  static PrivSprtConfig ForEpsilon(const HypothesisPair& hypotheses,
                                   double epsilon, double delta = 1e-5);
};

absl::Status ValidatePrivSprtConfig(const PrivSprtConfig& config);

// clamp(log p1(x) / p0(x), -a, a) for a bit x.
double TruncatedLlr(const HypothesisPair& hyp, int x, double trunc_a);

// Runs the baseline. Per step it adds the truncated LLR to the statistic and
// draws Y1, Y2; it stops with decision 1 when statistic + Y1 >= b + Z1, else
// with decision 0 when statistic + Y2 <= -a + Z2. Z1 and Z2 are drawn once.
// `trace`, if set, receives the noiseless statistic after every step.
absl::StatusOr<TestOutcome> RunPrivSprt(const PrivSprtConfig& config,
                                        const BitStream& observations,
                                        NoiseSource& noise,
                                        std::vector<double>* trace = nullptr);

absl::StatusOr<TestOutcome> RunPrivSprt(const PrivSprtConfig& config,
                                        const BitStream& observations,
                                        TrialStreams& streams);

struct ThresholdPair {
  double a = 0.0;
  double b = 0.0;
};

// {k log(1/beta) / 4} x {k log(1/alpha) / 4}, k = 1..12.
std::vector<ThresholdPair> LinearPrivSprtGrid(double alpha, double beta);

// {log(1/beta) / 4 * 2^(i/4)} x {log(1/alpha) / 4 * 2^(j/4)}, i, j = 0..56.
// Spans about four decades.
std::vector<ThresholdPair> GeometricPrivSprtGrid(double alpha, double beta);

struct CalibrationResult {
  ThresholdPair chosen;
  double pilot_type1 = 0.0;  // Under H0: fraction not deciding 0.
  double pilot_type2 = 0.0;  // Under H1: fraction not deciding 1.
  int64_t points_evaluated = 0;
};

// Evaluates grid points in increasing (a + b, a) order with `pilot_trials`
// runs under each hypothesis and returns the first whose pilot error rates
// are within targets. Runs that exhaust the horizon count as errors. Every
// point sees the same observation and noise streams. NotFound when no point
// qualifies; the message names the best attempt.
absl::StatusOr<CalibrationResult> CalibratePrivSprt(
    const PrivSprtConfig& base, double target_alpha, double target_beta,
    std::vector<ThresholdPair> grid, int64_t pilot_trials, uint64_t seed);

}  // namespace dpsprt

#endif  // DPSPRT_PRIVSPRT_H_
