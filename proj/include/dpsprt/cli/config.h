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

#ifndef DPSPRT_CLI_CONFIG_H_
#define DPSPRT_CLI_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpsprt/harness.h"

namespace dpsprt::cli {

// Every setting a subcommand reads. Each field has a config key and a flag
// of the same name (dashes and underscores are interchangeable).
struct RunSettings {
  double p0 = 0.3;
  double p1 = 0.7;
  double alpha = 0.05;
  double beta = 0.05;
  std::vector<double> eps = {0.1, 1.0, 5.0};
  bool eps_given = false;
  int64_t trials = 1000;
  uint64_t seed = 0;
  bool seed_given = false;
  int workers = 0;  // 0 = all available cores.
  std::optional<double> gamma;  // Empty = gamma(eps).
  std::optional<double> rate;   // Empty = r(eps).
  double s = 2.0;
  double kappa = 1.0;
  int64_t horizon = kDefaultHorizon;
  double delta = 1e-5;  // Gaussian variant and baseline scales.
  std::vector<std::string> variants = {"classical", "privsprt", "laplace",
                                       "gaussian", "laplace_sub"};
  std::vector<Truth> truths = {Truth::kH0, Truth::kH1};
  int64_t pilot_trials = 100;
  std::string privsprt_grid = "geometric";  // Or "linear".
  std::vector<double> kappa_grid = {0.1, 0.2, 0.3, 0.4, 0.5,
                                    0.6, 0.7, 0.8, 0.9, 1.0};
  int64_t kappa_pilot_trials = 1000;
  // Single variant examined by `bounds` and tuned by `tune-kappa`.
  std::string variant = "laplace";
  bool svg = true;
  std::string out;
  std::string config_path;
};

// Applies one key/value pair. `where` prefixes error messages, e.g.
// "run.cfg:12" or "--alpha".
absl::Status ApplySetting(RunSettings& settings, const std::string& key,
                          const std::string& value, const std::string& where);

// Parses a flat key/value file: one `key = value` per line, '#' starts a
// comment, blank lines are skipped. Errors name the file and line.
absl::Status ApplyConfigFile(RunSettings& settings, const std::string& path);

// Canonical key/value form of `settings`; applying it to a default
// RunSettings reproduces every setting except `out` and `config_path`.
std::map<std::string, std::string> SettingsToKeyValues(
    const RunSettings& settings);

// Sets the seed from DPSPRT_SEED if no config or flag supplied one.
absl::Status ApplySeedFallback(RunSettings& settings);

absl::Status ValidateSettings(const RunSettings& settings);

std::string FormatDouble(double value);

}  // namespace dpsprt::cli

#endif  // DPSPRT_CLI_CONFIG_H_
