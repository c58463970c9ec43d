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

#include "dpsprt/bounds.h"

#include <algorithm>
#include <cmath>
#include <limits>

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

constexpr double kInf = std::numeric_limits<double>::infinity();

double KlFor(const HypothesisPair& hyp, Direction direction) {
  return direction == Direction::kH0ToH1 ? hyp.kl01() : hyp.kl10();
}

absl::Status CheckDeltaGamma(double delta, double gamma, bool allow_gamma_one) {
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("error target must lie in (0, 1), got %g", delta));
  }
  const bool gamma_ok =
      gamma > 0.0 && (gamma < 1.0 || (allow_gamma_one && gamma == 1.0));
  if (!gamma_ok) {
    return absl::InvalidArgumentError(
        absl::StrFormat("gamma must lie in (0, 1), got %g", gamma));
  }
  return absl::OkStatus();
}

// log(zeta(s) / (2 (1 - gamma) delta)).
double ZetaLog(double s, double gamma, double delta) {
  return std::log(*RiemannZeta(s)) - std::log(2.0) - std::log1p(-gamma) -
         std::log(delta);
}

}  // namespace

absl::StatusOr<int64_t> CriticalN(const HypothesisPair& hyp,
                                  Direction direction, double delta,
                                  double gamma,
                                  const CorrectionParams& correction,
                                  NoiseFamily family) {
  if (absl::Status s =
          CheckDeltaGamma(delta, gamma, family == NoiseFamily::kZero);
      !s.ok()) {
    return s;
  }
  if (absl::Status s = ValidateCorrectionParams(correction, family); !s.ok()) {
    return s;
  }
  const double gap = hyp.theta_gap();
  const double target = 0.5 * KlFor(hyp, direction) / gap;
  const double log_term = std::log(1.0 / (delta * gamma));
  const double corr_delta = (1.0 - gamma) * delta;
  if (family != NoiseFamily::kZero) {
    if (absl::StatusOr<double> c = Correction(correction, family, 1,
                                              corr_delta);
        !c.ok()) {
      return c.status();
    }
  }
  auto holds = [&](int64_t n) {
    const double nd = static_cast<double>(n);
    const double c =
        internal::CorrectionUnchecked(correction, family, n, corr_delta);
    return log_term / nd / gap + 2.0 * c <= target;
  };

  int64_t hi = 1;
  while (!holds(hi)) {
    if (hi >= kCriticalNGuard) {
      return absl::OutOfRangeError(absl::StrFormat(
          "critical n exceeds %d; the instance is degenerate",
          kCriticalNGuard));
    }
    hi = std::min(hi * 2, kCriticalNGuard);
  }
  int64_t lo = hi / 2;  // Fails, or 0 when hi == 1.
  while (hi - lo > 1) {
    const int64_t mid = lo + (hi - lo) / 2;
    if (holds(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // The left side is only eventually monotone; confirm the neighborhood.
  for (int64_t n = std::max<int64_t>(1, hi - 2); n < hi; ++n) {
    if (holds(n)) return n;
  }
  return hi;
}

double ConstantTail(const HypothesisPair& hyp, double delta, double gamma) {
  const double tv = hyp.tv();
  const double gap = hyp.theta_gap();
  const double exponent = tv * tv * tv * tv / (2.0 * gap * gap);
  return 1.0 + (1.0 - gamma) * delta + 1.0 / -std::expm1(-exponent);
}

absl::StatusOr<double> UpperBoundExpectedTau(const HypothesisPair& hyp,
                                             Direction direction, double delta,
                                             double gamma,
                                             const CorrectionParams& correction,
                                             NoiseFamily family) {
  absl::StatusOr<int64_t> n =
      CriticalN(hyp, direction, delta, gamma, correction, family);
  if (!n.ok()) return n.status();
  return ConstantTail(hyp, delta, gamma) + static_cast<double>(*n);
}

double LogFixedPointBound(double b, double c) {
  return b * std::log(b * b + 2.0 * c) + c;
}

absl::StatusOr<double> LaplaceClosedUpper(const HypothesisPair& hyp,
                                          Direction direction, double delta,
                                          double gamma, double epsilon,
                                          double s) {
  if (absl::Status st = CheckDeltaGamma(delta, gamma, false); !st.ok()) {
    return st;
  }
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be positive, got %g", epsilon));
  }
  if (!(s > 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("s must exceed 1, got %g", s));
  }
  const double kl = KlFor(hyp, direction);
  const double gap = hyp.theta_gap();
  const double a = 2.0 * std::log(1.0 / (gamma * delta)) / kl;
  const double b_const = 24.0 * gap * ZetaLog(s, gamma, delta) / (epsilon * kl);
  const double b_log = 24.0 * s * gap / (kl * epsilon);
  const double n_bound =
      b_log > 0.0 ? LogFixedPointBound(b_log, a + b_const) : a + b_const;
  return n_bound + ConstantTail(hyp, delta, gamma);
}

absl::StatusOr<double> GaussianClosedUpper(const HypothesisPair& hyp,
                                           Direction direction, double delta,
                                           double gamma, double sigma_y,
                                           double sigma_z, double s) {
  if (absl::Status st = CheckDeltaGamma(delta, gamma, false); !st.ok()) {
    return st;
  }
  if (!(sigma_y >= 0.0) || !(sigma_z >= 0.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sigmas must be nonnegative, got y=%g z=%g", sigma_y, sigma_z));
  }
  if (!(s > 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("s must exceed 1, got %g", s));
  }
  const double kl = KlFor(hyp, direction);
  const double c = kl / hyp.theta_gap();
  const double sum_sq = sigma_y * sigma_y + sigma_z * sigma_z;
  const double plain = 4.0 * std::log(1.0 / (gamma * delta)) / kl;
  const double b = 64.0 * s * sum_sq / (c * c);
  const double cc = 128.0 * sum_sq * ZetaLog(s, gamma, delta) / (c * c);
  double noisy = 0.0;
  if (b > 0.0) {
    const double m = LogFixedPointBound(b, cc);
    if (m > 0.0) noisy = std::sqrt(m);
  }
  return std::max(plain, noisy) + ConstantTail(hyp, delta, gamma);
}

absl::StatusOr<std::pair<double, double>> LowerBound(const HypothesisPair& hyp,
                                                     double alpha, double beta,
                                                     double epsilon) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "alpha and beta must lie in (0, 1), got %g and %g", alpha, beta));
  }
  if (!(alpha + beta < 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "alpha + beta must be below 1, got %g", alpha + beta));
  }
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be positive, got %g", epsilon));
  }
  absl::StatusOr<double> kl_a = KlBernoulli(alpha, 1.0 - beta);
  if (!kl_a.ok()) return kl_a.status();
  absl::StatusOr<double> kl_b = KlBernoulli(beta, 1.0 - alpha);
  if (!kl_b.ok()) return kl_b.status();
  const double private_rate = epsilon * hyp.tv();
  return std::make_pair(*kl_a / std::min(hyp.kl01(), private_rate),
                        *kl_b / std::min(hyp.kl10(), private_rate));
}

absl::StatusOr<BoundReport> ComputeBoundReport(const TestConfig& config) {
  TestConfig effective = config;
  if (const auto* sub = std::get_if<LaplaceSubVariant>(&config.variant)) {
    effective.variant = LaplaceVariant{sub->epsilon};
  }
  absl::StatusOr<DpSprt> test = DpSprt::Create(effective);
  if (!test.ok()) return test.status();

  const double epsilon = std::visit(
      Overloaded{
          [](const ClassicalVariant&) { return kInf; },
          [](const LaplaceVariant& v) { return v.epsilon; },
          [](const GaussianVariant& v) { return v.epsilon; },
          [](const LaplaceSubVariant& v) { return v.epsilon; },
      },
      effective.variant);
  const HypothesisPair& hyp = config.hypotheses;
  const double gamma = test->gamma_used();
  const CorrectionParams& corr = test->correction();
  const NoiseFamily family = test->correction_family();

  BoundReport report{.gamma_used = gamma,
                     .epsilon_used = epsilon,
                     .s_used = corr.s};
  absl::StatusOr<std::pair<double, double>> lower =
      LowerBound(hyp, config.alpha, config.beta, epsilon);
  if (!lower.ok()) return lower.status();
  report.lower_h0 = lower->first;
  report.lower_h1 = lower->second;

  const struct {
    Direction direction;
    double delta;
    double* upper;
    double* closed;
  } sides[] = {
      {Direction::kH0ToH1, config.beta, &report.upper_h0,
       &report.closed_upper_h0},
      {Direction::kH1ToH0, config.alpha, &report.upper_h1,
       &report.closed_upper_h1},
  };
  for (const auto& side : sides) {
    absl::StatusOr<double> upper = UpperBoundExpectedTau(
        hyp, side.direction, side.delta, gamma, corr, family);
    if (!upper.ok()) return upper.status();
    *side.upper = *upper;

    absl::StatusOr<double> closed;
    if (const auto* g = std::get_if<GaussianVariant>(&effective.variant)) {
      closed = GaussianClosedUpper(hyp, side.direction, side.delta, gamma,
                                   g->sigma_y, g->sigma_z, corr.s);
    } else if (gamma < 1.0) {
      closed = LaplaceClosedUpper(hyp, side.direction, side.delta, gamma,
                                  epsilon, corr.s);
    } else {
      // Noise-free test: only the 2 log(1/delta) / KL term survives.
      closed = 2.0 * std::log(1.0 / side.delta) / KlFor(hyp, side.direction) +
               ConstantTail(hyp, side.delta, gamma);
    }
    if (!closed.ok()) return closed.status();
    *side.closed = *closed;
  }
  return report;
}

}  // namespace dpsprt
