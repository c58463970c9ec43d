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

#include "dpsprt/exp_family.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dpsprt {
namespace {

bool InOpenUnitInterval(double p) { return p > 0.0 && p < 1.0; }

// x log(x / y) with the 0 log 0 = 0 convention.
double XLogXOverY(double x, double y) {
  if (x == 0.0) return 0.0;
  if (y == 0.0) return std::numeric_limits<double>::infinity();
  return x * std::log(x / y);
}

}  // namespace

absl::StatusOr<double> NaturalParam(double p) {
  if (!InOpenUnitInterval(p)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("probability must lie in (0, 1), got %g", p));
  }
  return std::log(p) - std::log1p(-p);
}

double MeanFromNatural(double theta) {
  if (theta >= 0.0) return 1.0 / (1.0 + std::exp(-theta));
  const double e = std::exp(theta);
  return e / (1.0 + e);
}

double LogPartition(double theta) {
  return std::max(theta, 0.0) + std::log1p(std::exp(-std::fabs(theta)));
}

absl::StatusOr<double> KlBernoulli(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("kl arguments must lie in [0, 1], got (%g, %g)", p, q));
  }
  if (p == q) return 0.0;
  const double kl = XLogXOverY(p, q) + XLogXOverY(1.0 - p, 1.0 - q);
  // Rounding can push tiny divergences marginally below zero.
  return std::max(kl, 0.0);
}

double KlExponentialForm(double theta, double theta_prime) {
  if (theta == theta_prime) return 0.0;
  return MeanFromNatural(theta) * (theta - theta_prime) - LogPartition(theta) +
         LogPartition(theta_prime);
}

double TvBernoulli(double p, double q) { return std::fabs(p - q); }

absl::StatusOr<BernoulliParam> BernoulliParam::Create(double p) {
  absl::StatusOr<double> theta = NaturalParam(p);
  if (!theta.ok()) return theta.status();
  return BernoulliParam(p, *theta);
}

absl::StatusOr<HypothesisPair> HypothesisPair::Create(double p0, double p1) {
  absl::StatusOr<BernoulliParam> h0 = BernoulliParam::Create(p0);
  if (!h0.ok()) return h0.status();
  absl::StatusOr<BernoulliParam> h1 = BernoulliParam::Create(p1);
  if (!h1.ok()) return h1.status();
  if (!(p0 < p1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("hypotheses must satisfy p0 < p1, got p0=%g p1=%g", p0,
                        p1));
  }
  const double kl01 = *KlBernoulli(p0, p1);
  const double kl10 = *KlBernoulli(p1, p0);
  return HypothesisPair(*h0, *h1, kl01, kl10, TvBernoulli(p0, p1));
}

}  // namespace dpsprt
