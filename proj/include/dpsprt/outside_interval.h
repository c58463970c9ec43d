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

#ifndef DPSPRT_OUTSIDE_INTERVAL_H_
#define DPSPRT_OUTSIDE_INTERVAL_H_

#include <cstdint>
#include <functional>
#include <optional>

#include "absl/status/statusor.h"
#include "dpsprt/noise.h"

namespace dpsprt {

// Per-query thresholds T0^i (lower) and T1^i (upper), i >= 1. Nothing forces
// lower(i) <= upper(i).
struct ThresholdSchedule {
  std::function<double(int64_t)> lower;
  std::function<double(int64_t)> upper;
};

enum class Side { kTop0, kTop1 };

// The mechanism's output (bot, ..., bot, top_side) compressed to its length
// and final symbol. When a finite horizon is reached first, `exhausted` is set
// and `side` is empty.
struct IntervalOutcome {
  int64_t halt_index = 0;
  std::optional<Side> side;
  bool exhausted = false;
};

// Pull-based query stream: returns f_i(D) for successive i, or nullopt once
// the stream has run dry.
using QueryStream = std::function<std::optional<double>()>;

// Two-sided sparse-vector mechanism. Draws Z once, then for each query i draws
// a fresh Y_i and halts at the first i with
//   f_i + Y_i <= T0^i - Z   (Top0), else
//   f_i + Y_i >= T1^i + Z   (Top1).
// The lower check runs first, so crossed thresholds resolve to Top0.
// A horizon of nullopt means unbounded. Running out of queries before halting
// or reaching the horizon is an OutOfRange error, distinct from exhaustion.
absl::StatusOr<IntervalOutcome> RunOutsideInterval(
    const QueryStream& queries, const ThresholdSchedule& schedule,
    NoiseSource& noise, std::optional<int64_t> horizon);

// Pure-DP cost of the mechanism when Z's noise-adding mechanism is
// eps_z-DP at sensitivity Delta and Y's is eps_y-DP at sensitivity 2 Delta.
double EpsilonDpCost(double eps_z, double eps_y);

}  // namespace dpsprt

#endif  // DPSPRT_OUTSIDE_INTERVAL_H_
