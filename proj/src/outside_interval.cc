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

#include "dpsprt/outside_interval.h"

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dpsprt {

absl::StatusOr<IntervalOutcome> RunOutsideInterval(
    const QueryStream& queries, const ThresholdSchedule& schedule,
    NoiseSource& noise, std::optional<int64_t> horizon) {
  if (!schedule.lower || !schedule.upper) {
    return absl::InvalidArgumentError("threshold schedule is incomplete");
  }
  if (horizon.has_value() && *horizon < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("horizon must be positive, got %d", *horizon));
  }
  const double z = noise.SampleZ();
  for (int64_t i = 1; !horizon.has_value() || i <= *horizon; ++i) {
    const std::optional<double> query = queries();
    if (!query.has_value()) {
      return absl::OutOfRangeError(absl::StrFormat(
          "query stream ended after %d queries without a halt", i - 1));
    }
    const double noisy = *query + noise.SampleY();
    if (noisy <= schedule.lower(i) - z) {
      return IntervalOutcome{i, Side::kTop0, false};
    }
    if (noisy >= schedule.upper(i) + z) {
      return IntervalOutcome{i, Side::kTop1, false};
    }
  }
  return IntervalOutcome{*horizon, std::nullopt, true};
}

double EpsilonDpCost(double eps_z, double eps_y) { return eps_z + eps_y; }

}  // namespace dpsprt
