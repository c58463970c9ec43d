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

#ifndef DPSPRT_DP_SPRT_H_
#define DPSPRT_DP_SPRT_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "absl/status/statusor.h"
#include "dpsprt/exp_family.h"
#include "dpsprt/noise.h"
#include "dpsprt/rng.h"

namespace dpsprt {

// Wald's SPRT with the exact calibration gamma0 = beta, gamma1 = 1 / alpha.
struct ClassicalVariant {};

// Y ~ Lap(4 / epsilon), Z ~ Lap(2 / epsilon): epsilon-DP.
struct LaplaceVariant {
  double epsilon = 1.0;
};

// Y ~ N(0, sigma_y^2), Z ~ N(0, sigma_z^2): Renyi DP. `epsilon` is only the
// nominal privacy level the scales were derived from; it drives gamma(eps).
struct GaussianVariant {
  double sigma_y = 1.0;
  double sigma_z = 1.0;
  double epsilon = 1.0;
};

// Laplace variant on a Bernoulli(rate) subsample of the observations.
struct LaplaceSubVariant {
  double epsilon = 1.0;
  double rate = 1.0;
};

using Variant = std::variant<ClassicalVariant, LaplaceVariant, GaussianVariant,
                             LaplaceSubVariant>;

std::string VariantName(const Variant& variant);

// gamma(eps) = min(1/2, 1 - 1/eps) clamped to [0.01, 0.99].
double DefaultGamma(double epsilon);

// r(eps) = min(1, sqrt(eps / 10)).
double DefaultSubsamplingRate(double epsilon);

inline constexpr int64_t kDefaultHorizon = 1'000'000;

struct TestConfig {
  HypothesisPair hypotheses;
  double alpha = 0.05;
  double beta = 0.05;
  double gamma = 0.5;
  Variant variant = ClassicalVariant{};
  // s, zeta(s), kappa and the delta factors; epsilon / sigma_sum_sq are
  // filled in from the variant.
  CorrectionParams correction;
  int64_t horizon = kDefaultHorizon;
  uint64_t seed = 0;

  // Test hooks. Replace the variant's noise distributions, or drop the
  // correction term, without touching the threshold structure.
  std::optional<NoiseSpec> noise_override;
  bool disable_correction = false;
};

// Config with the default gamma(eps), s = 2 and kappa = 1.
absl::StatusOr<TestConfig> MakeTestConfig(const HypothesisPair& hypotheses,
                                          double alpha, double beta,
                                          const Variant& variant);

struct TestOutcome {
  int64_t tau = 0;
  std::optional<int> decision;  // Empty iff exhausted.
  bool exhausted = false;
  int64_t samples_consumed = 0;
  int64_t included_count = 0;  // M_tau; equals tau when not subsampling.
};

// Pull-based observation stream; nullopt once it has run dry.
using BitStream = std::function<std::optional<int>()>;

// Per-trial random streams. The observation stream is supplied separately.
struct TrialStreams {
  RandomStream noise_y;
  RandomStream noise_z;
  RandomStream subsample;

  // Streams keyed by (master_seed, variant_id, trial).
  static TrialStreams ForTrial(uint64_t master_seed, uint32_t variant_id,
                               uint32_t trial);
};

// A validated, precomputed sequential test. Immutable; Run() may be called
// concurrently from many threads with distinct streams.
class DpSprt {
 public:
  static absl::StatusOr<DpSprt> Create(const TestConfig& config);

  const TestConfig& config() const { return config_; }
  const NoiseSpec& noise() const { return noise_; }
  NoiseFamily correction_family() const { return correction_family_; }
  const CorrectionParams& correction() const { return correction_; }
  double gamma_used() const { return gamma_; }
  double rate() const { return rate_; }
  bool subsampled() const { return subsampled_; }

  // T0^n = mu0 + (KL01 - log(1 / (gamma beta)) / n) / (theta1 - theta0)
  //        - C(n, (1 - gamma) beta).
  double ThresholdLower(int64_t n) const;
  // T1^n = mu1 - (KL10 - log(1 / (gamma alpha)) / n) / (theta1 - theta0)
  //        + C(n, (1 - gamma) alpha).
  double ThresholdUpper(int64_t n) const;

  // Runs the test on `observations`, drawing noise from `streams`. The
  // subsampled variant also draws inclusion bits from streams.subsample.
  absl::StatusOr<TestOutcome> Run(const BitStream& observations,
                                  TrialStreams& streams) const;

  // Same, with noise realizations taken from an arbitrary source (tests).
  absl::StatusOr<TestOutcome> Run(const BitStream& observations,
                                  NoiseSource& noise,
                                  RandomStream& subsample) const;

  // Convenience: streams derived from config().seed.
  absl::StatusOr<TestOutcome> Run(const BitStream& observations) const;

 private:
  explicit DpSprt(const TestConfig& config) : config_(config) {}

  // Thresholds with the log term divided by `included` and the correction
  // scaled by rate_.
  double LowerAt(int64_t n, int64_t included) const;
  double UpperAt(int64_t n, int64_t included) const;

  TestConfig config_;
  NoiseSpec noise_;
  NoiseFamily correction_family_ = NoiseFamily::kZero;
  CorrectionParams correction_;
  double gamma_ = 1.0;
  double rate_ = 1.0;
  bool subsampled_ = false;
  double mu0_ = 0.0;
  double mu1_ = 0.0;
  double kl01_ = 0.0;
  double kl10_ = 0.0;
  double gap_ = 1.0;
  double log_term_lower_ = 0.0;  // log(1 / (gamma beta))
  double log_term_upper_ = 0.0;  // log(1 / (gamma alpha))
  double delta_lower_ = 0.0;     // (1 - gamma) beta
  double delta_upper_ = 0.0;     // (1 - gamma) alpha
};

// Free-function forms of the operations above.
absl::StatusOr<double> ThresholdLower(const TestConfig& config, int64_t n);
absl::StatusOr<double> ThresholdUpper(const TestConfig& config, int64_t n);
absl::StatusOr<TestOutcome> RunTest(const TestConfig& config,
                                    const BitStream& observations);
// Requires a LaplaceSubVariant.
absl::StatusOr<TestOutcome> RunTestSubsampled(const TestConfig& config,
                                              const BitStream& observations);

}  // namespace dpsprt

#endif  // DPSPRT_DP_SPRT_H_
