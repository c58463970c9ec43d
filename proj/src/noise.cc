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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dpsprt {

const char* NoiseFamilyName(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::kLaplace:
      return "laplace";
    case NoiseFamily::kGaussian:
      return "gaussian";
    case NoiseFamily::kZero:
      return "zero";
  }
  return "unknown";
}

NoiseSpec NoiseSpec::LaplaceForEpsilon(double epsilon) {
  return {NoiseFamily::kLaplace, 4.0 / epsilon, 2.0 / epsilon};
}

NoiseSpec NoiseSpec::Gaussian(double sigma_y, double sigma_z) {
  return {NoiseFamily::kGaussian, sigma_y, sigma_z};
}

NoiseSpec NoiseSpec::Zero() { return {NoiseFamily::kZero, 0.0, 0.0}; }

NoiseSpec GaussianForEpsilonDelta(double epsilon, double delta) {
  const double log_term = std::log(1.25 / delta);
  return NoiseSpec::Gaussian(std::sqrt(32.0 * log_term) / epsilon,
                             std::sqrt(8.0 * log_term) / epsilon);
}

absl::Status ValidateNoiseSpec(const NoiseSpec& spec) {
  if (spec.family == NoiseFamily::kZero) return absl::OkStatus();
  if (!(spec.scale_y > 0.0) || !(spec.scale_z > 0.0) ||
      !std::isfinite(spec.scale_y) || !std::isfinite(spec.scale_z)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%s noise scales must be positive and finite, got y=%g z=%g",
        NoiseFamilyName(spec.family), spec.scale_y, spec.scale_z));
  }
  return absl::OkStatus();
}

double SampleLaplace(double scale, RandomStream& rng) {
  // Inverse CDF on u in (-1/2, 1/2).
  const double u = rng.NextOpenDouble() - 0.5;
  const double magnitude = -scale * std::log1p(-2.0 * std::fabs(u));
  return u < 0.0 ? -magnitude : magnitude;
}

double SampleGaussian(double sigma, RandomStream& rng) {
  // Box-Muller, cosine branch only: two uniforms per draw.
  const double u1 = rng.NextOpenDouble();
  const double u2 = rng.NextDouble();
  return sigma * std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

double Sample(NoiseFamily family, double scale, RandomStream& rng) {
  switch (family) {
    case NoiseFamily::kLaplace:
      return SampleLaplace(scale, rng);
    case NoiseFamily::kGaussian:
      return SampleGaussian(scale, rng);
    case NoiseFamily::kZero:
      return 0.0;
  }
  return 0.0;
}

}  // namespace

double SampleY(const NoiseSpec& spec, RandomStream& rng) {
  return Sample(spec.family, spec.scale_y, rng);
}

double SampleZ(const NoiseSpec& spec, RandomStream& rng) {
  return Sample(spec.family, spec.scale_z, rng);
}

double LaplaceTail(double b, double t) { return 0.5 * std::exp(-t / b); }

double GaussianTailBound(double sigma, double t) {
  return std::exp(-t * t / (2.0 * sigma * sigma));
}

absl::StatusOr<double> RiemannZeta(double s) {
  if (!(s > 1.0) || !std::isfinite(s)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("zeta(s) requires finite s > 1, got %g", s));
  }
  constexpr int kDirectTerms = 10;
  // B_{2j} / (2j)! for j = 1..6.
  constexpr double kBernoulliOverFactorial[] = {
      1.0 / 12.0,           -1.0 / 720.0,          1.0 / 30240.0,
      -1.0 / 1209600.0,     1.0 / 47900160.0,      -691.0 / 1307674368000.0};
  double sum = 0.0;
  for (int k = kDirectTerms - 1; k >= 1; --k) sum += std::pow(k, -s);
  const double n = kDirectTerms;
  sum += std::pow(n, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(n, -s);
  // Rising factorial s (s+1) ... (s+2j-2) times N^{-s-2j+1}.
  double rising = s;
  double power = std::pow(n, -s - 1.0);
  for (int j = 0; j < 6; ++j) {
    sum += kBernoulliOverFactorial[j] * rising * power;
    rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
    power /= n * n;
  }
  return sum;
}

absl::StatusOr<CorrectionParams> CorrectionParams::Make(double s,
                                                        double kappa) {
  absl::StatusOr<double> zeta = RiemannZeta(s);
  if (!zeta.ok()) return zeta.status();
  if (!(kappa > 0.0 && kappa <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("kappa must lie in (0, 1], got %g", kappa));
  }
  CorrectionParams params;
  params.s = s;
  params.zeta_s = *zeta;
  params.kappa = kappa;
  return params;
}

absl::Status ValidateCorrectionParams(const CorrectionParams& params,
                                      NoiseFamily family) {
  if (family == NoiseFamily::kZero) return absl::OkStatus();
  if (!(params.s > 1.0) || !(params.zeta_s > 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "correction needs s > 1 and zeta(s) > 1, got s=%g zeta=%g", params.s,
        params.zeta_s));
  }
  if (!(params.kappa > 0.0 && params.kappa <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("kappa must lie in (0, 1], got %g", params.kappa));
  }
  if (family == NoiseFamily::kLaplace &&
      !(params.epsilon > 0.0 && params.laplace_delta_factor > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Laplace correction needs epsilon > 0, got %g",
                        params.epsilon));
  }
  if (family == NoiseFamily::kGaussian &&
      !(params.sigma_sum_sq > 0.0 && params.gaussian_delta_factor > 0.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Gaussian correction needs sigma_Y^2 + sigma_Z^2 > 0, got %g",
        params.sigma_sum_sq));
  }
  return absl::OkStatus();
}

namespace internal {

double CorrectionUnchecked(const CorrectionParams& params, NoiseFamily family,
                           int64_t n, double delta) {
  const double nd = static_cast<double>(n);
  switch (family) {
    case NoiseFamily::kLaplace: {
      const double log_arg = params.s * std::log(nd) + std::log(params.zeta_s) -
                             std::log(params.laplace_delta_factor * delta);
      return params.kappa * 6.0 * log_arg / (nd * params.epsilon);
    }
    case NoiseFamily::kGaussian: {
      const double log_arg = params.s * std::log(nd) + std::log(params.zeta_s) -
                             std::log(params.gaussian_delta_factor * delta);
      return params.kappa * std::sqrt(2.0 * params.sigma_sum_sq * log_arg) / nd;
    }
    case NoiseFamily::kZero:
      return 0.0;
  }
  return 0.0;
}

}  // namespace internal

absl::StatusOr<double> Correction(const CorrectionParams& params,
                                  NoiseFamily family, int64_t n, double delta) {
  if (n < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("correction needs n >= 1, got %d", n));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("correction needs delta in (0, 1), got %g", delta));
  }
  if (absl::Status status = ValidateCorrectionParams(params, family);
      !status.ok()) {
    return status;
  }
  if (family != NoiseFamily::kZero) {
    const double factor = family == NoiseFamily::kLaplace
                              ? params.laplace_delta_factor
                              : params.gaussian_delta_factor;
    const double log_arg = std::pow(static_cast<double>(n), params.s) *
                           params.zeta_s / (factor * delta);
    if (!(log_arg > 1.0)) {
      return absl::InternalError(absl::StrFormat(
          "correction log argument %g <= 1 (n=%d, delta=%g)", log_arg, n,
          delta));
    }
  }
  return internal::CorrectionUnchecked(params, family, n, delta);
}

absl::StatusOr<bool> DensityRatioBoundCheck(NoiseFamily family, double scale,
                                            double sensitivity, double epsilon,
                                            std::span<const double> grid) {
  if (family == NoiseFamily::kZero) {
    return absl::UnimplementedError("the zero noise family has no density");
  }
  if (grid.empty()) {
    return absl::InvalidArgumentError("density-ratio grid is empty");
  }
  if (!(scale > 0.0) || !(sensitivity > 0.0) || !(epsilon >= 0.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "need scale > 0, sensitivity > 0, epsilon >= 0; got %g, %g, %g", scale,
        sensitivity, epsilon));
  }
  // Compare log densities; the slack only absorbs rounding when the bound is
  // attained exactly, as it is for Laplace at scale = sensitivity / epsilon.
  const double slack = 1e-12 * std::max(1.0, epsilon);
  for (const double z : grid) {
    double log_ratio;
    if (family == NoiseFamily::kLaplace) {
      log_ratio = (std::fabs(z) - std::fabs(z - sensitivity)) / scale;
    } else {
      log_ratio = (2.0 * z * sensitivity - sensitivity * sensitivity) /
                  (2.0 * scale * scale);
    }
    if (log_ratio > epsilon + slack) return false;
  }
  return true;
}

}  // namespace dpsprt
