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

#ifndef DPSPRT_BOUNDS_H_
#define DPSPRT_BOUNDS_H_

#include <cstdint>
#include <utility>

#include "absl/status/statusor.h"
#include "dpsprt/dp_sprt.h"
#include "dpsprt/exp_family.h"
#include "dpsprt/noise.h"

namespace dpsprt {

// kH0ToH1 bounds E_{theta0}[tau] (KL01, error target beta); kH1ToH0 bounds
// E_{theta1}[tau] (KL10, error target alpha).
enum class Direction { kH0ToH1, kH1ToH0 };

inline constexpr int64_t kCriticalNGuard = 1'000'000'000;

// N(theta, theta', delta, gamma) = inf{n : log(1 / (delta gamma)) / n / gap
//     + 2 C(n, (1 - gamma) delta) <= KL / (2 gap)}.
// gamma may be 1 only with the Zero family. Fails with OutOfRange when no n
// below kCriticalNGuard qualifies.
absl::StatusOr<int64_t> CriticalN(const HypothesisPair& hyp,
                                  Direction direction, double delta,
                                  double gamma,
                                  const CorrectionParams& correction,
                                  NoiseFamily family);

// 1 + (1 - gamma) delta + 1 / (1 - exp(-TV^4 / (2 gap^2))).
double ConstantTail(const HypothesisPair& hyp, double delta, double gamma);

// ConstantTail + CriticalN.
absl::StatusOr<double> UpperBoundExpectedTau(const HypothesisPair& hyp,
                                             Direction direction, double delta,
                                             double gamma,
                                             const CorrectionParams& correction,
                                             NoiseFamily family);

// B log(B^2 + 2C) + C: every k with k <= B log k + C is at most this.
double LogFixedPointBound(double b, double c);

// Closed-form Laplace bound: 2 log(1/(gamma delta)) / KL
//   + 24 gap log(zeta(s) / 2(1 - gamma) delta) / (KL eps)
//   + LogFixedPointBound log term + ConstantTail.
// eps may be +infinity.
absl::StatusOr<double> LaplaceClosedUpper(const HypothesisPair& hyp,
                                          Direction direction, double delta,
                                          double gamma, double epsilon,
                                          double s);

// Closed-form Gaussian bound: max(4 log(1/(gamma delta)) / KL,
//   sqrt(LogFixedPointBound(64 s S / c^2,
//                           128 S log(zeta(s) / 2(1 - gamma) delta) / c^2)))
//   + ConstantTail, with S = sigma_y^2 + sigma_z^2 and c = KL / gap. A root
// branch whose argument is not positive contributes 0.
absl::StatusOr<double> GaussianClosedUpper(const HypothesisPair& hyp,
                                           Direction direction, double delta,
                                           double gamma, double sigma_y,
                                           double sigma_z, double s);

// (kl(alpha, 1 - beta) / min(KL01, eps TV), kl(beta, 1 - alpha) /
//  min(KL10, eps TV)). eps may be +infinity.
absl::StatusOr<std::pair<double, double>> LowerBound(const HypothesisPair& hyp,
                                                     double alpha, double beta,
                                                     double epsilon);

struct BoundReport {
  double lower_h0 = 0.0;
  double lower_h1 = 0.0;
  double upper_h0 = 0.0;
  double upper_h1 = 0.0;
  double closed_upper_h0 = 0.0;
  double closed_upper_h1 = 0.0;
  double gamma_used = 0.0;
  double epsilon_used = 0.0;  // +infinity for the classical variant.
  double s_used = 0.0;
};

// All bounds for one configured test. The subsampled variant reports the
// bounds of the plain Laplace test at the same epsilon.
absl::StatusOr<BoundReport> ComputeBoundReport(const TestConfig& config);

}  // namespace dpsprt

#endif  // DPSPRT_BOUNDS_H_
