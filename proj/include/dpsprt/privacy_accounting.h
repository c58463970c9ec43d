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

#ifndef DPSPRT_PRIVACY_ACCOUNTING_H_
#define DPSPRT_PRIVACY_ACCOUNTING_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpsprt/dp_sprt.h"

namespace dpsprt {

enum class GuaranteeKind { kPureDp, kRdp, kApproxDp };

const char* GuaranteeKindName(GuaranteeKind kind);

// Where the data-dependent E_z[E[tau | Z = z]^2] term of a Renyi profile came
// from. It is never defaulted silently.
enum class TauSqSource { kNone, kPilotEstimate, kUserAssertion };

const char* TauSqSourceName(TauSqSource source);

struct PrivacyGuarantee {
  GuaranteeKind kind = GuaranteeKind::kPureDp;
  double epsilon = 0.0;
  double delta = 0.0;
  // Order at which an RDP profile was evaluated or converted; 0 if unused.
  double alpha_order = 0.0;
  // Renyi profile alpha -> epsilon(alpha); set for kRdp.
  std::function<double(double)> profile;
  TauSqSource tau_sq_source = TauSqSource::kNone;
};

// Pure-DP budget of the Laplace variant at its default scales: epsilon / 2
// for Z (sensitivity 1) plus epsilon / 2 for Y (sensitivity 2).
PrivacyGuarantee LaplaceBudget(double epsilon);

// eps_Z + eps_Y = sensitivity / scale_z + 2 sensitivity / scale_y, for
// arbitrary Laplace scales. Infinite scales cost nothing.
absl::StatusOr<PrivacyGuarantee> LaplaceBudgetFromScales(double scale_z,
                                                         double scale_y,
                                                         double sensitivity);

// epsilon(alpha) = (alpha - 1/2) / (alpha - 1) * alpha / sigma_z^2
//                + alpha / (2 sigma_y^2)
//                + log(2 tau_sq_bound) / (2 (alpha - 1)).
// tau_sq_bound must upper bound E_z[E[tau | Z = z]^2]; infinite sigmas are
// allowed and contribute nothing.
absl::StatusOr<double> GaussianRdpProfile(double sigma_y, double sigma_z,
                                          double tau_sq_bound, double alpha);

absl::StatusOr<PrivacyGuarantee> GaussianRdpGuarantee(double sigma_y,
                                                      double sigma_z,
                                                      double tau_sq_bound,
                                                      TauSqSource source);

// (alpha, eps')-RDP implies (target_eps, exp(-(alpha - 1)(target_eps - eps')))
// -DP. Fails when target_eps <= eps'.
absl::StatusOr<PrivacyGuarantee> RdpToApproxDp(
    const std::function<double(double)>& profile, double alpha,
    double target_eps);

// Picks the order from `orders` minimizing profile(alpha) + log(1/delta) /
// (alpha - 1) and returns the resulting (epsilon, delta)-DP guarantee.
absl::StatusOr<PrivacyGuarantee> BestApproxDp(
    const std::function<double(double)>& profile, double delta,
    const std::vector<double>& orders);

struct TauSqEstimate {
  // 95% upper confidence value of E[tau^2], maximized over H0 and H1. An
  // estimate, not a certified bound.
  double value = 0.0;
  double mean_h0 = 0.0;
  double mean_h1 = 0.0;
  bool reliable = true;  // False if any pilot run exhausted its horizon.
};

// Monte Carlo estimate of E[tau^2] from `n_pilot` runs under each
// hypothesis, using Pilot-tagged streams of `seed`.
absl::StatusOr<TauSqEstimate> EstimateTauSq(const TestConfig& config,
                                            int64_t n_pilot, uint64_t seed);

}  // namespace dpsprt

#endif  // DPSPRT_PRIVACY_ACCOUNTING_H_
