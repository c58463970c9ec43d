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

#ifndef DPSPRT_CLI_CSV_WRITER_H_
#define DPSPRT_CLI_CSV_WRITER_H_

#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "dpsprt/harness.h"

namespace dpsprt::cli {

// Results of one variant under one truth.
struct ResultBlock {
  VariantMeta meta;
  Truth truth = Truth::kH0;
  VariantResult result;
};

// variant_id, truth, p0, p1, alpha, beta, gamma, epsilon, r, kappa, trial,
// tau, decision, exhausted, seed_lo, seed_hi
std::string PerTrialCsv(const std::vector<ResultBlock>& blocks);

// variant_id, truth, n_trials, n_exhausted, error_rate, error_ci, mean_tau,
// var_tau, tau_p5, tau_p50, tau_p95
std::string SummaryCsv(const std::vector<ResultBlock>& blocks);

struct FigureRow {
  double epsilon = 0.0;
  std::string variant_id;
  double mean_tau = 0.0;
  double tau_p5 = 0.0;
  double tau_p95 = 0.0;
  double type1_hat = 0.0;
  double type1_ci = 0.0;
};

// epsilon, variant_id, mean_tau, tau_p5, tau_p95, type1_hat, type1_ci
std::string FigureCsv(const std::vector<FigureRow>& rows);

// Joins cells with commas, quoting cells that need it.
std::string CsvLine(const std::vector<std::string>& cells);

// Files to be written together. Commit() writes each to a temporary name in
// `dir` and renames them into place only after every write succeeded.
class OutputSet {
 public:
  void Add(std::string name, std::string contents) {
    files_.emplace_back(std::move(name), std::move(contents));
  }
  const std::vector<std::pair<std::string, std::string>>& files() const {
    return files_;
  }
  std::vector<std::string> Names() const;
  absl::Status Commit(const std::string& dir) const;

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace dpsprt::cli

#endif  // DPSPRT_CLI_CSV_WRITER_H_
