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

#include <cmath>
#include <limits>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing/status_matchers.h"

namespace dpsprt {
namespace {

using ::dpsprt::testing::StatusIs;
using ::testing::DoubleNear;
using ::testing::HasSubstr;

TEST(NaturalParamTest, HalfMapsToZero) {
  ASSERT_OK_AND_ASSIGN(const double theta, NaturalParam(0.5));
  EXPECT_DOUBLE_EQ(theta, 0.0);
}

TEST(NaturalParamTest, AntisymmetricAroundOneHalf) {
  ASSERT_OK_AND_ASSIGN(const double hi, NaturalParam(0.7));
  ASSERT_OK_AND_ASSIGN(const double lo, NaturalParam(0.3));
  EXPECT_NEAR(hi, -lo, 1e-15);
  EXPECT_NEAR(hi, std::log(0.7 / 0.3), 1e-12);
  EXPECT_NEAR(hi, 0.84730, 5e-6);
}

TEST(NaturalParamTest, RejectsNonProbabilities) {
  for (const double p : {0.0, 1.0, -0.1, 1.5, std::nan("")}) {
    EXPECT_THAT(NaturalParam(p), StatusIs(absl::StatusCode::kInvalidArgument))
        << p;
  }
}

TEST(NaturalParamTest, InvertsMeanFromNaturalOnGrid) {
  for (int i = 1; i < 100; ++i) {
    const double p = i / 100.0;
    ASSERT_OK_AND_ASSIGN(const double theta, NaturalParam(p));
    EXPECT_NEAR(MeanFromNatural(theta), p, 1e-12 * p);
    EXPECT_NEAR(theta, std::log(p / (1 - p)),
                1e-12 * std::max(1.0, std::fabs(theta)));
  }
}

TEST(LogPartitionTest, KnownValues) {
  EXPECT_NEAR(LogPartition(0.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(LogPartition(50.0), 50.0, 1e-15);
  EXPECT_NEAR(LogPartition(-0.84730), std::log(1.0 + std::exp(-0.84730)),
              1e-15);
  EXPECT_NEAR(LogPartition(-std::log(7.0 / 3.0)), std::log(10.0 / 7.0), 1e-15);
}

TEST(LogPartitionTest, FiniteForExtremeArguments) {
  EXPECT_DOUBLE_EQ(LogPartition(1000.0), 1000.0);
  EXPECT_GE(LogPartition(-1000.0), 0.0);
  EXPECT_LT(LogPartition(-1000.0), 1e-300);
}

TEST(KlBernoulliTest, ZeroOnDiagonal) {
  for (const double p : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    ASSERT_OK_AND_ASSIGN(const double kl, KlBernoulli(p, p));
    EXPECT_EQ(kl, 0.0) << p;
  }
}

TEST(KlBernoulliTest, MatchesDirectFormula) {
  ASSERT_OK_AND_ASSIGN(const double kl, KlBernoulli(0.3, 0.7));
  EXPECT_NEAR(kl, 0.3 * std::log(0.3 / 0.7) + 0.7 * std::log(0.7 / 0.3),
              1e-15);
  EXPECT_NEAR(kl, 0.338919, 1e-6);
}

TEST(KlBernoulliTest, ZeroLogZeroConvention) {
  ASSERT_OK_AND_ASSIGN(const double kl, KlBernoulli(0.0, 0.25));
  EXPECT_NEAR(kl, std::log(1.0 / 0.75), 1e-15);
}

TEST(KlBernoulliTest, InfiniteWhenSupportIsLost) {
  ASSERT_OK_AND_ASSIGN(const double kl, KlBernoulli(0.5, 0.0));
  EXPECT_EQ(kl, std::numeric_limits<double>::infinity());
  ASSERT_OK_AND_ASSIGN(const double kl1, KlBernoulli(0.5, 1.0));
  EXPECT_EQ(kl1, std::numeric_limits<double>::infinity());
}

TEST(KlBernoulliTest, RejectsOutOfRange) {
  EXPECT_THAT(KlBernoulli(-0.1, 0.5),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(KlBernoulli(0.5, 1.1),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(KlExponentialFormTest, AgreesWithBernoulliKlAndPinsker) {
  for (int i = 1; i < 100; i += 7) {
    for (int j = 1; j < 100; j += 5) {
      const double p = i / 100.0;
      const double q = j / 100.0;
      ASSERT_OK_AND_ASSIGN(const double kl, KlBernoulli(p, q));
      ASSERT_OK_AND_ASSIGN(const double tp, NaturalParam(p));
      ASSERT_OK_AND_ASSIGN(const double tq, NaturalParam(q));
      EXPECT_NEAR(KlExponentialForm(tp, tq), kl, 1e-10);
      EXPECT_GE(kl, 2.0 * (p - q) * (p - q) - 1e-15);
    }
  }
}

TEST(KlExponentialFormTest, ZeroOnDiagonal) {
  EXPECT_NEAR(KlExponentialForm(0.3, 0.3), 0.0, 1e-16);
}

TEST(TvBernoulliTest, AbsoluteDifference) {
  EXPECT_NEAR(TvBernoulli(0.3, 0.7), 0.4, 1e-15);
  EXPECT_NEAR(TvBernoulli(0.05, 0.25), 0.2, 1e-15);
  EXPECT_EQ(TvBernoulli(0.4, 0.4), 0.0);
}

TEST(BernoulliParamTest, CarriesNaturalParameter) {
  ASSERT_OK_AND_ASSIGN(const BernoulliParam param, BernoulliParam::Create(0.7));
  EXPECT_EQ(param.p(), 0.7);
  EXPECT_NEAR(param.theta(), std::log(0.7 / 0.3), 1e-12);
  EXPECT_THAT(BernoulliParam::Create(1.0),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(HypothesisPairTest, SymmetricInstance) {
  ASSERT_OK_AND_ASSIGN(const HypothesisPair hyp,
                       HypothesisPair::Create(0.3, 0.7));
  EXPECT_NEAR(hyp.tv(), 0.4, 1e-15);
  EXPECT_NEAR(hyp.kl01(), 0.4 * std::log(7.0 / 3.0), 1e-12);
  EXPECT_NEAR(hyp.kl10(), hyp.kl01(), 1e-12);
  EXPECT_NEAR(hyp.theta_gap(), 2.0 * std::log(7.0 / 3.0), 1e-12);
  EXPECT_THAT(hyp.theta_gap(), DoubleNear(1.694596, 1e-6));
}

TEST(HypothesisPairTest, AsymmetricInstanceHasDistinctDivergences) {
  ASSERT_OK_AND_ASSIGN(const HypothesisPair hyp,
                       HypothesisPair::Create(0.05, 0.25));
  EXPECT_NEAR(hyp.tv(), 0.2, 1e-15);
  ASSERT_OK_AND_ASSIGN(const double kl01, KlBernoulli(0.05, 0.25));
  ASSERT_OK_AND_ASSIGN(const double kl10, KlBernoulli(0.25, 0.05));
  EXPECT_NEAR(hyp.kl01(), kl01, 1e-15);
  EXPECT_NEAR(hyp.kl10(), kl10, 1e-15);
  EXPECT_GT(hyp.kl01(), 0.0);
  EXPECT_GT(hyp.kl10(), 0.0);
}

TEST(HypothesisPairTest, RequiresOrderedDistinctMeans) {
  EXPECT_THAT(HypothesisPair::Create(0.7, 0.3),
              StatusIs(absl::StatusCode::kInvalidArgument, HasSubstr("p0")));
  EXPECT_THAT(HypothesisPair::Create(0.5, 0.5),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(HypothesisPair::Create(0.0, 0.5),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

}  // namespace
}  // namespace dpsprt
