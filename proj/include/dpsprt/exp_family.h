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

#ifndef DPSPRT_EXP_FAMILY_H_
#define DPSPRT_EXP_FAMILY_H_

#include "absl/status/statusor.h"

namespace dpsprt {

// Bernoulli arithmetic in its one-parameter exponential-family form
// f_theta(x) = exp(theta * x - b(theta)), b(theta) = log(1 + e^theta).

// theta = log(p / (1 - p)). Requires 0 < p < 1.
absl::StatusOr<double> NaturalParam(double p);

// Inverse of NaturalParam: e^theta / (1 + e^theta), evaluated stably.
double MeanFromNatural(double theta);

// b(theta) = max(theta, 0) + log1p(e^{-|theta|}); finite for all finite theta.
double LogPartition(double theta);

// Binary relative entropy kl(p, q) with 0 log 0 = 0. Returns +infinity when
// q is 0 or 1 and p != q. Rejects arguments outside [0, 1].
absl::StatusOr<double> KlBernoulli(double p, double q);

// KL(nu_theta, nu_theta') = mu(theta) (theta - theta') - b(theta) + b(theta').
double KlExponentialForm(double theta, double theta_prime);

// |p - q|.
double TvBernoulli(double p, double q);

class BernoulliParam {
 public:
  static absl::StatusOr<BernoulliParam> Create(double p);

  double p() const { return p_; }
  double theta() const { return theta_; }

 private:
  BernoulliParam(double p, double theta) : p_(p), theta_(theta) {}

  double p_;
  double theta_;
};

// The two simple hypotheses H0: p = p0 and H1: p = p1 with p0 < p1, together
// with the divergences every stopping rule and bound needs.
class HypothesisPair {
 public:
  static absl::StatusOr<HypothesisPair> Create(double p0, double p1);

  const BernoulliParam& h0() const { return h0_; }
  const BernoulliParam& h1() const { return h1_; }
  double kl01() const { return kl01_; }
  double kl10() const { return kl10_; }
  double tv() const { return tv_; }
  // theta1 - theta0 > 0.
  double theta_gap() const { return h1_.theta() - h0_.theta(); }

 private:
  HypothesisPair(BernoulliParam h0, BernoulliParam h1, double kl01, double kl10,
                 double tv)
      : h0_(h0), h1_(h1), kl01_(kl01), kl10_(kl10), tv_(tv) {}

  BernoulliParam h0_;
  BernoulliParam h1_;
  double kl01_;
  double kl10_;
  double tv_;
};

}  // namespace dpsprt

#endif  // DPSPRT_EXP_FAMILY_H_
