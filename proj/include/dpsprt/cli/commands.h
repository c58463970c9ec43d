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

#ifndef DPSPRT_CLI_COMMANDS_H_
#define DPSPRT_CLI_COMMANDS_H_

#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpsprt/bounds.h"
#include "dpsprt/cli/config.h"
#include "dpsprt/cli/csv_writer.h"
#include "dpsprt/dp_sprt.h"
#include "dpsprt/privsprt.h"

namespace dpsprt::cli {

inline constexpr char kToolVersion[] = "1.0.0";

// 0 success, 2 configuration error, 3 infeasible calibration or tuning,
// 1 anything else.
int ExitCodeFor(const absl::Status& status);

// Label of `variant` at `epsilon`, e.g. "laplace@eps=0.1".
std::string VariantLabel(const std::string& variant, double epsilon);

absl::StatusOr<TestConfig> BuildTestConfig(const RunSettings& settings,
                                           const std::string& variant,
                                           double epsilon);

struct CalibrationRecord {
  double epsilon = 0.0;
  std::string grid;
  CalibrationResult result;
};

struct SimulationOutput {
  std::vector<ResultBlock> blocks;
  std::vector<CalibrationRecord> calibrations;
};

// Runs every (epsilon, variant) pair under every requested truth. The
// baseline is calibrated first at each epsilon.
absl::StatusOr<SimulationOutput> Simulate(const RunSettings& settings);

// One row per variant and epsilon, from the blocks run under H0.
std::vector<FigureRow> FigureRows(const SimulationOutput& output);

struct BoundsRow {
  std::string variant;
  bool has_epsilon = false;
  double epsilon = 0.0;
  BoundReport report;  // Upper bounds are NaN when !has_epsilon.
};

absl::StatusOr<std::vector<BoundsRow>> Bounds(const RunSettings& settings);

std::string BoundsCsv(const std::vector<BoundsRow>& rows);

struct KappaPilot {
  double kappa = 0.0;
  double type1 = 0.0;
  double type2 = 0.0;
  bool feasible = false;
};

struct TuneKappaResult {
  double epsilon = 0.0;
  double kappa = 1.0;
  std::vector<KappaPilot> pilots;  // Ascending kappa.
  // Fresh runs at the selected kappa with settings.trials trials.
  std::vector<ResultBlock> confirmation;
};

// Picks the smallest kappa on the grid, i.e. the largest reduction of the
// correction term, whose pilot error rates are within the targets. NotFound
// when none is.
absl::StatusOr<TuneKappaResult> TuneKappa(const RunSettings& settings);

// Runs `command` ("simulate", "bounds", "compare", "tune-kappa"), writes its
// outputs and manifest, and returns the exit code. Human-readable results go
// to `out`, diagnostics to `err`.
int RunCommand(const std::string& command, const RunSettings& settings,
               std::ostream& out, std::ostream& err);

// Entry point of the dpsprt binary.
int Main(int argc, char** argv);

}  // namespace dpsprt::cli

#endif  // DPSPRT_CLI_COMMANDS_H_
