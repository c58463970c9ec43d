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

#include "dpsprt/privsprt.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "dpsprt/harness.h"

namespace dpsprt {

PrivSprtConfig PrivSprtConfig::ForEpsilon(const HypothesisPair& hypotheses,
                                          double epsilon, double delta) {
  const NoiseSpec gaussian = GaussianForEpsilonDelta(epsilon, delta);
  constexpr double kTruncA = 1.0;
  const double factor = 2.0 * std::sqrt(2.0) * kTruncA;
  return PrivSprtConfig{
      .hypotheses = hypotheses,
      .trunc_a = kTruncA,
      .noise = NoiseSpec::Gaussian(factor * gaussian.scale_y,
                                   factor * gaussian.scale_z),
      .epsilon = epsilon,
  };
}

absl::Status ValidatePrivSprtConfig(const PrivSprtConfig& config) {
  if (!(config.trunc_a > 0.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "truncation half-width must be positive, got %g", config.trunc_a));
  }
  if (!std::isfinite(config.thresh_a) || !std::isfinite(config.thresh_b)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "thresholds must be finite, got a=%g b=%g",
        config.thresh_a, config.thresh_b));
  }
  if (config.horizon < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("horizon must be positive, got %d", config.horizon));
  }
  if (config.noise.family == NoiseFamily::kLaplace) {
    return absl::InvalidArgumentError("the baseline uses Gaussian noise");
  }
  return ValidateNoiseSpec(config.noise);
}

double TruncatedLlr(const HypothesisPair& hyp, int x, double trunc_a) {
  const double p0 = hyp.h0().p();
  const double p1 = hyp.h1().p();
  const double llr = x == 1 ? std::log(p1 / p0)
                            : std::log1p(-p1) - std::log1p(-p0);
  return std::clamp(llr, -trunc_a, trunc_a);
}

absl::StatusOr<TestOutcome> RunPrivSprt(const PrivSprtConfig& config,
                                        const BitStream& observations,
                                        NoiseSource& noise,
                                        std::vector<double>* trace) {
  if (absl::Status s = ValidatePrivSprtConfig(config); !s.ok()) return s;
  const double llr[2] = {TruncatedLlr(config.hypotheses, 0, config.trunc_a),
                         TruncatedLlr(config.hypotheses, 1, config.trunc_a)};
  const double upper = config.thresh_b + noise.SampleZ();
  const double lower = -config.thresh_a + noise.SampleZ();
  double statistic = 0.0;
  for (int64_t n = 1; n <= config.horizon; ++n) {
    const std::optional<int> x = observations();
    if (!x.has_value()) {
      return absl::OutOfRangeError(absl::StrFormat(
          "observation stream ended after %d samples without a decision",
          n - 1));
    }
    if (*x != 0 && *x != 1) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "observation %d is %d; observations must be bits", n, *x));
    }
    statistic += llr[*x];
    if (trace != nullptr) trace->push_back(statistic);
    const double y1 = noise.SampleY();
    const double y2 = noise.SampleY();
    if (statistic + y1 >= upper) return TestOutcome{n, 1, false, n, n};
    if (statistic + y2 <= lower) return TestOutcome{n, 0, false, n, n};
  }
  return TestOutcome{config.horizon, std::nullopt, true, config.horizon,
                     config.horizon};
}

absl::StatusOr<TestOutcome> RunPrivSprt(const PrivSprtConfig& config,
                                        const BitStream& observations,
                                        TrialStreams& streams) {
  StreamNoiseSource noise(config.noise, streams.noise_y, streams.noise_z);
  return RunPrivSprt(config, observations, noise);
}

namespace {

std::vector<ThresholdPair> ProductGrid(const std::vector<double>& as,
                                       const std::vector<double>& bs) {
  std::vector<ThresholdPair> grid;
  grid.reserve(as.size() * bs.size());
  for (const double a : as) {
    for (const double b : bs) grid.push_back({a, b});
  }
  return grid;
}

struct PilotErrors {
  int64_t type1 = 0;
  int64_t type2 = 0;
};

absl::StatusOr<PilotErrors> RunPilots(const PrivSprtConfig& config,
                                      int64_t pilot_trials,
                                      uint64_t pilot_seed) {
  const double ps[2] = {config.hypotheses.h0().p(),
                        config.hypotheses.h1().p()};
  std::vector<char> wrong(2 * pilot_trials, 0);
  std::vector<absl::Status> errors(2 * pilot_trials);
#pragma omp parallel for schedule(dynamic, 8)
  for (int64_t k = 0; k < 2 * pilot_trials; ++k) {
    const int h = static_cast<int>(k / pilot_trials);
    const uint32_t trial = static_cast<uint32_t>(k % pilot_trials);
    BernoulliStream obs = MakeBernoulliStream(ps[h], pilot_seed, h, trial);
    TrialStreams streams = TrialStreams::ForTrial(pilot_seed, h, trial);
    absl::StatusOr<TestOutcome> outcome =
        RunPrivSprt(config, obs.AsBitStream(), streams);
    if (!outcome.ok()) {
      errors[k] = outcome.status();
      continue;
    }
    wrong[k] = outcome->decision != h ? 1 : 0;
  }
  PilotErrors result;
  for (int64_t k = 0; k < 2 * pilot_trials; ++k) {
    if (!errors[k].ok()) return errors[k];
    (k < pilot_trials ? result.type1 : result.type2) += wrong[k];
  }
  return result;
}

}  // namespace

std::vector<ThresholdPair> LinearPrivSprtGrid(double alpha, double beta) {
  std::vector<double> as, bs;
  for (int k = 1; k <= 12; ++k) {
    as.push_back(k * std::log(1.0 / beta) / 4.0);
    bs.push_back(k * std::log(1.0 / alpha) / 4.0);
  }
  return ProductGrid(as, bs);
}

std::vector<ThresholdPair> GeometricPrivSprtGrid(double alpha, double beta) {
  std::vector<double> as, bs;
  for (int j = 0; j <= 56; ++j) {
    const double factor = std::exp2(j / 4.0) / 4.0;
    as.push_back(factor * std::log(1.0 / beta));
    bs.push_back(factor * std::log(1.0 / alpha));
  }
  return ProductGrid(as, bs);
}

absl::StatusOr<CalibrationResult> CalibratePrivSprt(
    const PrivSprtConfig& base, double target_alpha, double target_beta,
    std::vector<ThresholdPair> grid, int64_t pilot_trials, uint64_t seed) {
  if (grid.empty()) return absl::InvalidArgumentError("threshold grid is empty");
  if (pilot_trials < 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "pilot_trials must be positive, got %d", pilot_trials));
  }
  if (!(target_alpha > 0.0 && target_alpha < 1.0) ||
      !(target_beta > 0.0 && target_beta < 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "error targets must lie in (0, 1), got alpha=%g beta=%g", target_alpha,
        target_beta));
  }
  std::stable_sort(grid.begin(), grid.end(),
                   [](const ThresholdPair& x, const ThresholdPair& y) {
                     const double sx = x.a + x.b;
                     const double sy = y.a + y.b;
                     if (sx != sy) return sx < sy;
                     return x.a < y.a;
                   });
  const uint64_t pilot_seed =
      RandomStream({seed, 0, 0, Substream::kPilot}).NextU64();
  const double n = static_cast<double>(pilot_trials);

  CalibrationResult best;
  double best_excess = std::numeric_limits<double>::infinity();
  int64_t evaluated = 0;
  for (const ThresholdPair& point : grid) {
    PrivSprtConfig config = base;
    config.thresh_a = point.a;
    config.thresh_b = point.b;
    absl::StatusOr<PilotErrors> errors =
        RunPilots(config, pilot_trials, pilot_seed);
    if (!errors.ok()) return errors.status();
    ++evaluated;
    const double t1 = errors->type1 / n;
    const double t2 = errors->type2 / n;
    if (t1 <= target_alpha && t2 <= target_beta) {
      return CalibrationResult{point, t1, t2, evaluated};
    }
    const double excess =
        std::max(0.0, t1 - target_alpha) + std::max(0.0, t2 - target_beta);
    if (excess < best_excess) {
      best_excess = excess;
      best = CalibrationResult{point, t1, t2, evaluated};
    }
  }
  return absl::NotFoundError(absl::StrFormat(
      "no threshold pair met alpha=%g beta=%g over %d grid points; best was "
      "a=%g b=%g with pilot errors %g / %g",
      target_alpha, target_beta, evaluated, best.chosen.a, best.chosen.b,
      best.pilot_type1, best.pilot_type2));
}

}  // namespace dpsprt
