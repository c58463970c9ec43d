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

#include "dpsprt/privacy_accounting.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "dpsprt/harness.h"

namespace dpsprt {
namespace {

// Cost sensitivity / scale of one Laplace mechanism; zero for infinite scale.
double LaplaceCost(double sensitivity, double scale) {
  return std::isinf(scale) ? 0.0 : sensitivity / scale;
}

double InverseSq(double sigma) {
  return std::isinf(sigma) ? 0.0 : 1.0 / (sigma * sigma);
}

struct MomentSums {
  double sum = 0.0;
  double sum_sq = 0.0;
  bool exhausted = false;
};

}  // namespace

const char* GuaranteeKindName(GuaranteeKind kind) {
  switch (kind) {
    case GuaranteeKind::kPureDp:
      return "pure_dp";
    case GuaranteeKind::kRdp:
      return "rdp";
    case GuaranteeKind::kApproxDp:
      return "approx_dp";
  }
  return "unknown";
}

const char* TauSqSourceName(TauSqSource source) {
  switch (source) {
    case TauSqSource::kNone:
      return "none";
    case TauSqSource::kPilotEstimate:
      return "pilot_estimate";
    case TauSqSource::kUserAssertion:
      return "user_assertion";
  }
  return "unknown";
}

PrivacyGuarantee LaplaceBudget(double epsilon) {
  return PrivacyGuarantee{.kind = GuaranteeKind::kPureDp, .epsilon = epsilon};
}

absl::StatusOr<PrivacyGuarantee> LaplaceBudgetFromScales(double scale_z,
                                                         double scale_y,
                                                         double sensitivity) {
  if (!(scale_z > 0.0) || !(scale_y > 0.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Laplace scales must be positive, got z=%g y=%g", scale_z, scale_y));
  }
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sensitivity must be positive and finite, got %g", sensitivity));
  }
  const double eps_z = LaplaceCost(sensitivity, scale_z);
  const double eps_y = LaplaceCost(2.0 * sensitivity, scale_y);
  return PrivacyGuarantee{.kind = GuaranteeKind::kPureDp,
                          .epsilon = eps_z + eps_y};
}

absl::StatusOr<double> GaussianRdpProfile(double sigma_y, double sigma_z,
                                          double tau_sq_bound, double alpha) {
  if (!(alpha > 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Renyi order must exceed 1, got %g", alpha));
  }
  if (!(sigma_y > 0.0) || !(sigma_z > 0.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sigmas must be positive, got y=%g z=%g", sigma_y, sigma_z));
  }
  if (!(tau_sq_bound > 0.0) || !std::isfinite(tau_sq_bound)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "tau_sq_bound must be positive and finite, got %g", tau_sq_bound));
  }
  const double z_term =
      (alpha - 0.5) / (alpha - 1.0) * alpha * InverseSq(sigma_z);
  const double y_term = alpha / 2.0 * InverseSq(sigma_y);
  const double tau_term = std::log(2.0 * tau_sq_bound) / (2.0 * (alpha - 1.0));
  return z_term + y_term + tau_term;
}

absl::StatusOr<PrivacyGuarantee> GaussianRdpGuarantee(double sigma_y,
                                                      double sigma_z,
                                                      double tau_sq_bound,
                                                      TauSqSource source) {
  if (source == TauSqSource::kNone) {
    return absl::InvalidArgumentError(
        "a Gaussian RDP guarantee needs an explicit tau_sq_bound source");
  }
  // Validates the arguments once.
  if (absl::StatusOr<double> probe =
          GaussianRdpProfile(sigma_y, sigma_z, tau_sq_bound, 2.0);
      !probe.ok()) {
    return probe.status();
  }
  PrivacyGuarantee g{.kind = GuaranteeKind::kRdp, .tau_sq_source = source};
  g.profile = [sigma_y, sigma_z, tau_sq_bound](double alpha) {
    absl::StatusOr<double> eps =
        GaussianRdpProfile(sigma_y, sigma_z, tau_sq_bound, alpha);
    return eps.ok() ? *eps : std::numeric_limits<double>::infinity();
  };
  return g;
}

absl::StatusOr<PrivacyGuarantee> RdpToApproxDp(
    const std::function<double(double)>& profile, double alpha,
    double target_eps) {
  if (!profile) return absl::InvalidArgumentError("profile is empty");
  if (!(alpha > 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Renyi order must exceed 1, got %g", alpha));
  }
  const double eps_alpha = profile(alpha);
  if (!(target_eps > eps_alpha)) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "target epsilon %g does not exceed the Renyi epsilon %g at order %g",
        target_eps, eps_alpha, alpha));
  }
  return PrivacyGuarantee{
      .kind = GuaranteeKind::kApproxDp,
      .epsilon = target_eps,
      .delta = std::exp(-(alpha - 1.0) * (target_eps - eps_alpha)),
      .alpha_order = alpha};
}

absl::StatusOr<PrivacyGuarantee> BestApproxDp(
    const std::function<double(double)>& profile, double delta,
    const std::vector<double>& orders) {
  if (!profile) return absl::InvalidArgumentError("profile is empty");
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in (0, 1), got %g", delta));
  }
  double best_eps = std::numeric_limits<double>::infinity();
  double best_alpha = 0.0;
  for (const double alpha : orders) {
    if (!(alpha > 1.0)) continue;
    const double eps = profile(alpha) + std::log(1.0 / delta) / (alpha - 1.0);
    if (eps < best_eps) {
      best_eps = eps;
      best_alpha = alpha;
    }
  }
  if (!std::isfinite(best_eps)) {
    return absl::InvalidArgumentError("no usable Renyi order above 1");
  }
  return PrivacyGuarantee{.kind = GuaranteeKind::kApproxDp,
                          .epsilon = best_eps,
                          .delta = delta,
                          .alpha_order = best_alpha};
}

absl::StatusOr<TauSqEstimate> EstimateTauSq(const TestConfig& config,
                                            int64_t n_pilot, uint64_t seed) {
  if (n_pilot < 100) {
    return absl::InvalidArgumentError(
        absl::StrFormat("n_pilot must be at least 100, got %d", n_pilot));
  }
  absl::StatusOr<DpSprt> test = DpSprt::Create(config);
  if (!test.ok()) return test.status();

  const uint64_t pilot_seed =
      RandomStream({seed, 0, 0, Substream::kPilot}).NextU64();
  const double ps[2] = {config.hypotheses.h0().p(),
                        config.hypotheses.h1().p()};
  std::vector<MomentSums> sums(2);
  absl::Status first_error = absl::OkStatus();

  for (int h = 0; h < 2; ++h) {
    std::vector<double> tau_sq(n_pilot, 0.0);
    std::vector<char> exhausted(n_pilot, 0);
    std::vector<absl::Status> errors(n_pilot);
#pragma omp parallel for schedule(dynamic, 16)
    for (int64_t i = 0; i < n_pilot; ++i) {
      const uint32_t variant_id = static_cast<uint32_t>(h);
      const uint32_t trial = static_cast<uint32_t>(i);
      BernoulliStream obs =
          MakeBernoulliStream(ps[h], pilot_seed, variant_id, trial);
      TrialStreams streams =
          TrialStreams::ForTrial(pilot_seed, variant_id, trial);
      absl::StatusOr<TestOutcome> outcome =
          test->Run(obs.AsBitStream(), streams);
      if (!outcome.ok()) {
        errors[i] = outcome.status();
        continue;
      }
      const double tau = static_cast<double>(outcome->tau);
      tau_sq[i] = tau * tau;
      exhausted[i] = outcome->exhausted ? 1 : 0;
    }
    for (int64_t i = 0; i < n_pilot; ++i) {
      if (!errors[i].ok()) return errors[i];
      sums[h].sum += tau_sq[i];
      sums[h].sum_sq += tau_sq[i] * tau_sq[i];
      sums[h].exhausted |= exhausted[i] != 0;
    }
  }

  TauSqEstimate estimate;
  const double n = static_cast<double>(n_pilot);
  for (int h = 0; h < 2; ++h) {
    const double mean = sums[h].sum / n;
    const double var =
        std::max(0.0, (sums[h].sum_sq - n * mean * mean) / (n - 1.0));
    const double upper = mean + 1.96 * std::sqrt(var / n);
    (h == 0 ? estimate.mean_h0 : estimate.mean_h1) = mean;
    estimate.value = std::max(estimate.value, upper);
    if (sums[h].exhausted) estimate.reliable = false;
  }
  return estimate;
}

}  // namespace dpsprt
