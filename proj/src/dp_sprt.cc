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

#include "dpsprt/dp_sprt.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dpsprt {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool IsProbability(double x) { return x > 0.0 && x < 1.0; }

absl::Status CheckPositiveFinite(const char* name, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s must be positive and finite, got %g", name, value));
  }
  return absl::OkStatus();
}

}  // namespace

std::string VariantName(const Variant& variant) {
  return std::visit(Overloaded{
                        [](const ClassicalVariant&) { return "classical"; },
                        [](const LaplaceVariant&) { return "laplace"; },
                        [](const GaussianVariant&) { return "gaussian"; },
                        [](const LaplaceSubVariant&) { return "laplace_sub"; },
                    },
                    variant);
}

double DefaultGamma(double epsilon) {
  return std::clamp(std::min(0.5, 1.0 - 1.0 / epsilon), 0.01, 0.99);
}

double DefaultSubsamplingRate(double epsilon) {
  return std::min(1.0, std::sqrt(epsilon / 10.0));
}

absl::StatusOr<TestConfig> MakeTestConfig(const HypothesisPair& hypotheses,
                                          double alpha, double beta,
                                          const Variant& variant) {
  absl::StatusOr<CorrectionParams> correction =
      CorrectionParams::Make(/*s=*/2.0, /*kappa=*/1.0);
  if (!correction.ok()) return correction.status();
  const double epsilon = std::visit(
      Overloaded{
          [](const ClassicalVariant&) { return 0.0; },
          [](const LaplaceVariant& v) { return v.epsilon; },
          [](const GaussianVariant& v) { return v.epsilon; },
          [](const LaplaceSubVariant& v) { return v.epsilon; },
      },
      variant);
  TestConfig config{.hypotheses = hypotheses,
                    .alpha = alpha,
                    .beta = beta,
                    .gamma = epsilon > 0.0 ? DefaultGamma(epsilon) : 0.5,
                    .variant = variant,
                    .correction = *correction};
  if (absl::StatusOr<DpSprt> test = DpSprt::Create(config); !test.ok()) {
    return test.status();
  }
  return config;
}

TrialStreams TrialStreams::ForTrial(uint64_t master_seed, uint32_t variant_id,
                                    uint32_t trial) {
  return TrialStreams{
      RandomStream({master_seed, variant_id, trial, Substream::kNoiseY}),
      RandomStream({master_seed, variant_id, trial, Substream::kNoiseZ}),
      RandomStream({master_seed, variant_id, trial, Substream::kSubsample}),
  };
}

absl::StatusOr<DpSprt> DpSprt::Create(const TestConfig& config) {
  if (!IsProbability(config.alpha) || !IsProbability(config.beta)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "alpha and beta must lie in (0, 1), got alpha=%g beta=%g", config.alpha,
        config.beta));
  }
  if (config.horizon < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("horizon must be positive, got %d", config.horizon));
  }
  const bool classical =
      std::holds_alternative<ClassicalVariant>(config.variant);
  if (!classical && !IsProbability(config.gamma)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("gamma must lie in (0, 1), got %g", config.gamma));
  }

  DpSprt test(config);
  test.correction_ = config.correction;
  absl::Status status = std::visit(
      Overloaded{
          [&](const ClassicalVariant&) {
            test.noise_ = NoiseSpec::Zero();
            test.correction_family_ = NoiseFamily::kZero;
            return absl::OkStatus();
          },
          [&](const LaplaceVariant& v) {
            if (absl::Status s = CheckPositiveFinite("epsilon", v.epsilon);
                !s.ok()) {
              return s;
            }
            test.noise_ = NoiseSpec::LaplaceForEpsilon(v.epsilon);
            test.correction_family_ = NoiseFamily::kLaplace;
            test.correction_.epsilon = v.epsilon;
            return absl::OkStatus();
          },
          [&](const GaussianVariant& v) {
            if (absl::Status s = CheckPositiveFinite("sigma_y", v.sigma_y);
                !s.ok()) {
              return s;
            }
            if (absl::Status s = CheckPositiveFinite("sigma_z", v.sigma_z);
                !s.ok()) {
              return s;
            }
            test.noise_ = NoiseSpec::Gaussian(v.sigma_y, v.sigma_z);
            test.correction_family_ = NoiseFamily::kGaussian;
            test.correction_.sigma_sum_sq =
                v.sigma_y * v.sigma_y + v.sigma_z * v.sigma_z;
            return absl::OkStatus();
          },
          [&](const LaplaceSubVariant& v) {
            if (absl::Status s = CheckPositiveFinite("epsilon", v.epsilon);
                !s.ok()) {
              return s;
            }
            if (!(v.rate > 0.0 && v.rate <= 1.0)) {
              return absl::InvalidArgumentError(absl::StrFormat(
                  "subsampling rate must lie in (0, 1], got %g", v.rate));
            }
            test.noise_ = NoiseSpec::LaplaceForEpsilon(v.epsilon);
            test.correction_family_ = NoiseFamily::kLaplace;
            test.correction_.epsilon = v.epsilon;
            test.rate_ = v.rate;
            test.subsampled_ = true;
            return absl::OkStatus();
          },
      },
      config.variant);
  if (!status.ok()) return status;

  if (config.noise_override.has_value()) test.noise_ = *config.noise_override;
  if (config.disable_correction) test.correction_family_ = NoiseFamily::kZero;
  if (status = ValidateNoiseSpec(test.noise_); !status.ok()) return status;
  if (status = ValidateCorrectionParams(test.correction_,
                                        test.correction_family_);
      !status.ok()) {
    return status;
  }

  const HypothesisPair& hyp = config.hypotheses;
  test.gamma_ = classical ? 1.0 : config.gamma;
  test.mu0_ = hyp.h0().p();
  test.mu1_ = hyp.h1().p();
  test.kl01_ = hyp.kl01();
  test.kl10_ = hyp.kl10();
  test.gap_ = hyp.theta_gap();
  test.log_term_lower_ = std::log(1.0 / (test.gamma_ * config.beta));
  test.log_term_upper_ = std::log(1.0 / (test.gamma_ * config.alpha));
  test.delta_lower_ = (1.0 - test.gamma_) * config.beta;
  test.delta_upper_ = (1.0 - test.gamma_) * config.alpha;

  // The correction's log argument grows with n, so checking n = 1 covers
  // every step.
  if (test.correction_family_ != NoiseFamily::kZero) {
    for (const double delta : {test.delta_lower_, test.delta_upper_}) {
      if (absl::StatusOr<double> c = Correction(
              test.correction_, test.correction_family_, /*n=*/1, delta);
          !c.ok()) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "correction undefined for these error targets: %s",
            c.status().message()));
      }
    }
  }
  return test;
}

double DpSprt::LowerAt(int64_t n, int64_t included) const {
  const double c = internal::CorrectionUnchecked(
      correction_, correction_family_, n, delta_lower_);
  return mu0_ +
         (kl01_ - log_term_lower_ / static_cast<double>(included)) / gap_ -
         rate_ * c;
}

double DpSprt::UpperAt(int64_t n, int64_t included) const {
  const double c = internal::CorrectionUnchecked(
      correction_, correction_family_, n, delta_upper_);
  return mu1_ -
         (kl10_ - log_term_upper_ / static_cast<double>(included)) / gap_ +
         rate_ * c;
}

double DpSprt::ThresholdLower(int64_t n) const { return LowerAt(n, n); }
double DpSprt::ThresholdUpper(int64_t n) const { return UpperAt(n, n); }

absl::StatusOr<TestOutcome> DpSprt::Run(const BitStream& observations,
                                        NoiseSource& noise,
                                        RandomStream& subsample) const {
  const int64_t horizon = config_.horizon;
  const double z = noise.SampleZ();
  int64_t sum = 0;
  int64_t included = 0;
  for (int64_t n = 1; n <= horizon; ++n) {
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
    if (!subsampled_ || subsample.NextDouble() < rate_) {
      sum += *x;
      ++included;
    }
    const double y = noise.SampleY();
    if (included == 0) continue;

    const double nd = static_cast<double>(n);
    const double statistic =
        static_cast<double>(sum) / static_cast<double>(included) +
        rate_ * y / nd;
    if (statistic <= LowerAt(n, included) - rate_ * z / nd) {
      return TestOutcome{n, 0, false, n, included};
    }
    if (statistic >= UpperAt(n, included) + rate_ * z / nd) {
      return TestOutcome{n, 1, false, n, included};
    }
  }
  return TestOutcome{horizon, std::nullopt, true, horizon, included};
}

absl::StatusOr<TestOutcome> DpSprt::Run(const BitStream& observations,
                                        TrialStreams& streams) const {
  StreamNoiseSource noise(noise_, streams.noise_y, streams.noise_z);
  return Run(observations, noise, streams.subsample);
}

absl::StatusOr<TestOutcome> DpSprt::Run(const BitStream& observations) const {
  TrialStreams streams = TrialStreams::ForTrial(config_.seed, 0, 0);
  return Run(observations, streams);
}

absl::StatusOr<double> ThresholdLower(const TestConfig& config, int64_t n) {
  absl::StatusOr<DpSprt> test = DpSprt::Create(config);
  if (!test.ok()) return test.status();
  if (n < 1) return absl::InvalidArgumentError("n must be positive");
  return test->ThresholdLower(n);
}

absl::StatusOr<double> ThresholdUpper(const TestConfig& config, int64_t n) {
  absl::StatusOr<DpSprt> test = DpSprt::Create(config);
  if (!test.ok()) return test.status();
  if (n < 1) return absl::InvalidArgumentError("n must be positive");
  return test->ThresholdUpper(n);
}

absl::StatusOr<TestOutcome> RunTest(const TestConfig& config,
                                    const BitStream& observations) {
  absl::StatusOr<DpSprt> test = DpSprt::Create(config);
  if (!test.ok()) return test.status();
  return test->Run(observations);
}

absl::StatusOr<TestOutcome> RunTestSubsampled(const TestConfig& config,
                                              const BitStream& observations) {
  if (!std::holds_alternative<LaplaceSubVariant>(config.variant)) {
    return absl::InvalidArgumentError(
        "RunTestSubsampled requires a LaplaceSubVariant config");
  }
  return RunTest(config, observations);
}

}  // namespace dpsprt
