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

#ifndef DPSPRT_NOISE_H_
#define DPSPRT_NOISE_H_

#include <cstdint>
#include <span>

#include "absl/status/statusor.h"
#include "dpsprt/rng.h"

namespace dpsprt {

enum class NoiseFamily {
  kLaplace,
  kGaussian,
  // Degenerate family: every draw is exactly 0. Test double only.
  kZero,
};

const char* NoiseFamilyName(NoiseFamily family);

// Distributions of the per-step query noise Y and the one-shot threshold noise
// Z. `scale_y` / `scale_z` are the Laplace scale b or the Gaussian standard
// deviation.
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::kZero;
  double scale_y = 0.0;
  double scale_z = 0.0;

  // Y ~ Lap(4 / epsilon), Z ~ Lap(2 / epsilon).
  static NoiseSpec LaplaceForEpsilon(double epsilon);
  static NoiseSpec Gaussian(double sigma_y, double sigma_z);
  static NoiseSpec Zero();
};

// Gaussian scales giving (epsilon / 2, delta)-DP to queries of sensitivity 2
// (Y) and 1 (Z): sigma_Y^2 = 32 ln(1.25 / delta) / epsilon^2 and
// sigma_Z^2 = 8 ln(1.25 / delta) / epsilon^2.
NoiseSpec GaussianForEpsilonDelta(double epsilon, double delta);

absl::Status ValidateNoiseSpec(const NoiseSpec& spec);

double SampleLaplace(double scale, RandomStream& rng);
double SampleGaussian(double sigma, RandomStream& rng);

double SampleY(const NoiseSpec& spec, RandomStream& rng);
double SampleZ(const NoiseSpec& spec, RandomStream& rng);

// Source of the noise realizations consumed by the stopping mechanisms.
// Implementations other than StreamNoiseSource exist only in tests.
class NoiseSource {
 public:
  virtual ~NoiseSource() = default;
  virtual double SampleY() = 0;
  virtual double SampleZ() = 0;
};

class StreamNoiseSource : public NoiseSource {
 public:
  // Both streams must outlive this object.
  StreamNoiseSource(const NoiseSpec& spec, RandomStream& y_stream,
                    RandomStream& z_stream)
      : spec_(spec), y_stream_(y_stream), z_stream_(z_stream) {}

  double SampleY() override { return dpsprt::SampleY(spec_, y_stream_); }
  double SampleZ() override { return dpsprt::SampleZ(spec_, z_stream_); }

 private:
  NoiseSpec spec_;
  RandomStream& y_stream_;
  RandomStream& z_stream_;
};

// P(X >= t) = exp(-t / b) / 2 for X ~ Lap(b), t >= 0.
double LaplaceTail(double b, double t);

// Chernoff bound exp(-t^2 / (2 sigma^2)) on P(X > t) for X ~ N(0, sigma^2).
double GaussianTailBound(double sigma, double t);

// Riemann zeta for s > 1: direct sum plus Euler-Maclaurin tail, ~1e-15
// relative accuracy.
absl::StatusOr<double> RiemannZeta(double s);

// Parameters of the correction function C(n, delta) that widens the
// thresholds to absorb the noise tails.
struct CorrectionParams {
  double s = 2.0;
  double zeta_s = 0.0;  // zeta(s); filled by Make().
  double epsilon = 0.0;       // Laplace only.
  double sigma_sum_sq = 0.0;  // Gaussian only: sigma_Y^2 + sigma_Z^2.
  // Multiplies the whole correction. Values below 1 void the correctness
  // guarantee.
  double kappa = 1.0;
  // delta is multiplied by this factor inside the logarithm: 1 for Laplace,
  // 2 for Gaussian.
  double laplace_delta_factor = 1.0;
  double gaussian_delta_factor = 2.0;

  static absl::StatusOr<CorrectionParams> Make(double s, double kappa);
  bool has_formal_guarantee() const { return kappa >= 1.0; }
};

absl::Status ValidateCorrectionParams(const CorrectionParams& params,
                                      NoiseFamily family);

// Laplace:  kappa * 6 log(n^s zeta(s) / delta) / (n epsilon)
// Gaussian: kappa * sqrt(2 (sigma_Y^2 + sigma_Z^2) log(n^s zeta(s) / 2delta)) / n
// Zero:     0
absl::StatusOr<double> Correction(const CorrectionParams& params,
                                  NoiseFamily family, int64_t n, double delta);

namespace internal {
// Correction() without argument validation, for inner loops whose inputs
// were validated up front.
double CorrectionUnchecked(const CorrectionParams& params, NoiseFamily family,
                           int64_t n, double delta);
}  // namespace internal

// Checks p(z - sensitivity) <= e^epsilon p(z) at every grid point, i.e. the
// density-ratio condition an epsilon-DP noise-adding mechanism must satisfy.
absl::StatusOr<bool> DensityRatioBoundCheck(NoiseFamily family, double scale,
                                            double sensitivity, double epsilon,
                                            std::span<const double> grid);

}  // namespace dpsprt

#endif  // DPSPRT_NOISE_H_
