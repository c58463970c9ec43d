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

#include "dpsprt/noise.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing/status_matchers.h"

namespace dpsprt {
namespace {

using ::dpsprt::testing::StatusIs;

constexpr int kDraws = 1'000'000;

RandomStream TestStream(uint32_t trial) {
  return RandomStream({777, 1, trial, Substream::kNoiseY});
}

std::vector<double> Grid(double lo, double hi, double step) {
  std::vector<double> grid;
  const int n = static_cast<int>(std::round((hi - lo) / step));
  for (int i = 0; i <= n; ++i) grid.push_back(lo + i * step);
  return grid;
}

TEST(NoiseSpecTest, LaplaceDefaultsScaleWithEpsilon) {
  const NoiseSpec spec = NoiseSpec::LaplaceForEpsilon(0.5);
  EXPECT_EQ(spec.family, NoiseFamily::kLaplace);
  EXPECT_DOUBLE_EQ(spec.scale_y, 8.0);
  EXPECT_DOUBLE_EQ(spec.scale_z, 4.0);
}

TEST(NoiseSpecTest, GaussianScalesFromEpsilonDelta) {
  const NoiseSpec spec = GaussianForEpsilonDelta(1.0, 1e-5);
  EXPECT_NEAR(spec.scale_y * spec.scale_y, 32.0 * std::log(1.25e5), 1e-9);
  EXPECT_NEAR(spec.scale_z * spec.scale_z, 8.0 * std::log(1.25e5), 1e-9);
}

TEST(NoiseSpecTest, ValidationRejectsBadScales) {
  EXPECT_OK(ValidateNoiseSpec(NoiseSpec::Zero()));
  EXPECT_THAT(ValidateNoiseSpec(NoiseSpec::Gaussian(0.0, 1.0)),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(ValidateNoiseSpec({NoiseFamily::kLaplace, 1.0, -1.0}),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(SampleTest, ZeroFamilyAlwaysReturnsZero) {
  RandomStream rng = TestStream(0);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(SampleY(NoiseSpec::Zero(), rng), 0.0);
    EXPECT_EQ(SampleZ(NoiseSpec::Zero(), rng), 0.0);
  }
}

TEST(SampleTest, LaplaceMeanAndTail) {
  constexpr double kScale = 3.0;
  RandomStream rng = TestStream(1);
  double sum = 0.0;
  int above = 0;
  for (int i = 0; i < kDraws; ++i) {
    const double x = SampleLaplace(kScale, rng);
    sum += x;
    if (x >= kScale * std::log(2.0)) ++above;
  }
  EXPECT_NEAR(sum / kDraws, 0.0, 5.0 * kScale / 1000.0);
  EXPECT_NEAR(static_cast<double>(above) / kDraws, 0.25, 0.002);
}

TEST(SampleTest, LaplaceZLowerTailAtEpsilonOne) {
  const NoiseSpec spec = NoiseSpec::LaplaceForEpsilon(1.0);
  RandomStream rng = TestStream(2);
  int below = 0;
  for (int i = 0; i < kDraws; ++i) {
    if (SampleZ(spec, rng) <= -2.0 * std::log(10.0)) ++below;
  }
  EXPECT_NEAR(static_cast<double>(below) / kDraws, 0.05, 0.002);
}

TEST(SampleTest, GaussianVarianceWithinOnePercent) {
  constexpr double kSigma = 2.5;
  const NoiseSpec spec = NoiseSpec::Gaussian(1.0, kSigma);
  RandomStream rng = TestStream(3);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double z = SampleZ(spec, rng);
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / kDraws;
  const double var = sum_sq / kDraws - mean * mean;
  EXPECT_NEAR(var, kSigma * kSigma, 0.01 * kSigma * kSigma);
  EXPECT_NEAR(mean, 0.0, 5.0 * kSigma / 1000.0);
}

TEST(SampleTest, TailBoundsDominateEmpiricalTails) {
  constexpr int kN = 200'000;
  for (const double t : {0.5, 1.0, 2.0, 3.0}) {
    RandomStream rng = TestStream(4);
    int lap = 0, gauss = 0;
    for (int i = 0; i < kN; ++i) {
      if (SampleLaplace(1.0, rng) >= t) ++lap;
      if (SampleGaussian(1.0, rng) > t) ++gauss;
    }
    const double p_lap = static_cast<double>(lap) / kN;
    const double p_gauss = static_cast<double>(gauss) / kN;
    const double se_lap = std::sqrt(LaplaceTail(1.0, t) / kN);
    const double se_gauss = std::sqrt(GaussianTailBound(1.0, t) / kN);
    EXPECT_LE(p_lap, LaplaceTail(1.0, t) + 3.0 * se_lap) << t;
    EXPECT_LE(p_gauss, GaussianTailBound(1.0, t) + 3.0 * se_gauss) << t;
  }
}

TEST(SampleTest, StreamNoiseSourceUsesSeparateStreams) {
  RandomStream y = TestStream(5);
  RandomStream z({777, 1, 5, Substream::kNoiseZ});
  RandomStream y_copy = TestStream(5);
  const NoiseSpec spec = NoiseSpec::LaplaceForEpsilon(1.0);
  StreamNoiseSource source(spec, y, z);
  source.SampleZ();
  EXPECT_EQ(source.SampleY(), SampleY(spec, y_copy));
}

TEST(LaplaceTailTest, ClosedForm) {
  EXPECT_DOUBLE_EQ(LaplaceTail(3.0, 0.0), 0.5);
  EXPECT_NEAR(LaplaceTail(4.0, 4.0 * std::log(20.0)), 0.025, 1e-15);
  EXPECT_NEAR(LaplaceTail(2.0, 2.0 * std::log(10.0)), 0.05, 1e-15);
}

TEST(GaussianTailBoundTest, ClosedForm) {
  EXPECT_DOUBLE_EQ(GaussianTailBound(1.0, 0.0), 1.0);
  EXPECT_NEAR(GaussianTailBound(2.0, 2.0), std::exp(-0.5), 1e-15);
}

TEST(RiemannZetaTest, KnownValues) {
  const double pi = std::numbers::pi;
  ASSERT_OK_AND_ASSIGN(const double z2, RiemannZeta(2.0));
  EXPECT_NEAR(z2, pi * pi / 6.0, 1e-12);
  ASSERT_OK_AND_ASSIGN(const double z4, RiemannZeta(4.0));
  EXPECT_NEAR(z4, std::pow(pi, 4) / 90.0, 1e-12);
  ASSERT_OK_AND_ASSIGN(const double z3, RiemannZeta(3.0));
  EXPECT_NEAR(z3, 1.2020569031595942, 1e-12);
  ASSERT_OK_AND_ASSIGN(const double z15, RiemannZeta(1.5));
  EXPECT_NEAR(z15, 2.6123753486854883, 1e-10);
}

TEST(RiemannZetaTest, MatchesLongPartialSum) {
  // Partial sum to 10^6 plus the integral tail 1/((s-1) N^(s-1)).
  constexpr double kS = 2.7;
  double sum = 0.0;
  for (int k = 1000000; k >= 1; --k) sum += std::pow(k, -kS);
  sum += std::pow(1e6, 1.0 - kS) / (kS - 1.0) - 0.5 * std::pow(1e6, -kS);
  ASSERT_OK_AND_ASSIGN(const double z, RiemannZeta(kS));
  EXPECT_NEAR(z, sum, 1e-10);
}

TEST(RiemannZetaTest, RejectsPoleAndBelow) {
  EXPECT_THAT(RiemannZeta(1.0), StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(RiemannZeta(0.5), StatusIs(absl::StatusCode::kInvalidArgument));
}

class CorrectionTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_OK_AND_ASSIGN(params_, CorrectionParams::Make(2.0, 1.0));
    params_.epsilon = 1.0;
    params_.sigma_sum_sq = 1.0;
  }
  CorrectionParams params_;
};

TEST_F(CorrectionTest, LaplaceAtNOne) {
  ASSERT_OK_AND_ASSIGN(const double c,
                       Correction(params_, NoiseFamily::kLaplace, 1, 0.05));
  const double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
  EXPECT_NEAR(c, 6.0 * std::log(zeta2 / 0.05), 1e-12);
  EXPECT_NEAR(c, 20.9606, 1e-4);
}

TEST_F(CorrectionTest, GaussianAtNTen) {
  ASSERT_OK_AND_ASSIGN(const double c,
                       Correction(params_, NoiseFamily::kGaussian, 10, 0.05));
  const double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
  EXPECT_NEAR(c, std::sqrt(2.0 * std::log(100.0 * zeta2 / 0.1)) / 10.0, 1e-12);
  EXPECT_NEAR(c, 0.38485, 1e-5);
}

TEST_F(CorrectionTest, ZeroFamilyIsZero) {
  for (const int64_t n : {1, 10, 1000}) {
    ASSERT_OK_AND_ASSIGN(const double c,
                         Correction(params_, NoiseFamily::kZero, n, 0.3));
    EXPECT_EQ(c, 0.0);
  }
}

TEST_F(CorrectionTest, KappaScalesLinearly) {
  ASSERT_OK_AND_ASSIGN(const double full,
                       Correction(params_, NoiseFamily::kLaplace, 7, 0.05));
  params_.kappa = 0.5;
  ASSERT_OK_AND_ASSIGN(const double half,
                       Correction(params_, NoiseFamily::kLaplace, 7, 0.05));
  EXPECT_NEAR(half, 0.5 * full, 1e-12);
  EXPECT_FALSE(params_.has_formal_guarantee());
}

TEST_F(CorrectionTest, DecreasingInNAndEpsilon) {
  for (const NoiseFamily family :
       {NoiseFamily::kLaplace, NoiseFamily::kGaussian}) {
    double previous = 1e300;
    for (int64_t n = 3; n <= 500; ++n) {
      ASSERT_OK_AND_ASSIGN(const double c, Correction(params_, family, n, 0.05));
      EXPECT_LT(c, previous) << NoiseFamilyName(family) << " n=" << n;
      previous = c;
    }
  }
  ASSERT_OK_AND_ASSIGN(const double eps1,
                       Correction(params_, NoiseFamily::kLaplace, 5, 0.05));
  params_.epsilon = 2.0;
  ASSERT_OK_AND_ASSIGN(const double eps2,
                       Correction(params_, NoiseFamily::kLaplace, 5, 0.05));
  EXPECT_LT(eps2, eps1);
}

TEST_F(CorrectionTest, RejectsInvalidArguments) {
  EXPECT_THAT(Correction(params_, NoiseFamily::kLaplace, 0, 0.05),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(Correction(params_, NoiseFamily::kLaplace, 1, 1.0),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(CorrectionParams::Make(2.0, 1.5),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(CorrectionParams::Make(1.0, 1.0),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST_F(CorrectionTest, GuardsDegenerateLogArgument) {
  params_.zeta_s = 1.0 + 1e-12;
  params_.s = 1.0 + 1e-9;
  params_.gaussian_delta_factor = 2.0;
  EXPECT_THAT(Correction(params_, NoiseFamily::kGaussian, 1, 0.9),
              StatusIs(absl::StatusCode::kInternal));
}

TEST(DensityRatioBoundCheckTest, LaplaceAtItsPrivacyLevel) {
  const std::vector<double> grid = Grid(-10.0, 10.0, 0.1);
  ASSERT_OK_AND_ASSIGN(
      const bool ok,
      DensityRatioBoundCheck(NoiseFamily::kLaplace, 4.0, 2.0, 0.5, grid));
  EXPECT_TRUE(ok);
  ASSERT_OK_AND_ASSIGN(
      const bool tight,
      DensityRatioBoundCheck(NoiseFamily::kLaplace, 4.0, 2.0, 0.4, grid));
  EXPECT_FALSE(tight);
}

TEST(DensityRatioBoundCheckTest, GaussianOnCompactGrid) {
  ASSERT_OK_AND_ASSIGN(
      const bool ok, DensityRatioBoundCheck(NoiseFamily::kGaussian, 1.0, 1.0,
                                            10.0, Grid(-3.0, 3.0, 0.1)));
  EXPECT_TRUE(ok);
  ASSERT_OK_AND_ASSIGN(
      const bool too_small,
      DensityRatioBoundCheck(NoiseFamily::kGaussian, 1.0, 1.0, 1.0,
                             Grid(-3.0, 3.0, 0.1)));
  EXPECT_FALSE(too_small);
}

TEST(DensityRatioBoundCheckTest, RejectsZeroFamilyAndEmptyGrid) {
  const std::vector<double> grid = {0.0};
  EXPECT_THAT(DensityRatioBoundCheck(NoiseFamily::kZero, 1.0, 1.0, 1.0, grid),
              StatusIs(absl::StatusCode::kUnimplemented));
  EXPECT_THAT(DensityRatioBoundCheck(NoiseFamily::kLaplace, 1.0, 1.0, 1.0, {}),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

}  // namespace
}  // namespace dpsprt
