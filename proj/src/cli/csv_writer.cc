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

#include "dpsprt/cli/csv_writer.h"

#include <filesystem>
#include <fstream>
#include <system_error>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_replace.h"
#include "dpsprt/cli/config.h"

namespace dpsprt::cli {
namespace {

std::string Cell(double v) { return FormatDouble(v); }

}  // namespace

std::string CsvLine(const std::vector<std::string>& cells) {
  std::string line;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") != std::string::npos) {
      absl::StrAppend(&line, "\"", absl::StrReplaceAll(c, {{"\"", "\"\""}}),
                      "\"");
    } else {
      line += c;
    }
  }
  line += '\n';
  return line;
}

std::string PerTrialCsv(const std::vector<ResultBlock>& blocks) {
  std::string out = CsvLine({"variant_id", "truth", "p0", "p1", "alpha",
                             "beta", "gamma", "epsilon", "r", "kappa", "trial",
                             "tau", "decision", "exhausted", "seed_lo",
                             "seed_hi"});
  for (const ResultBlock& b : blocks) {
    const VariantMeta& m = b.meta;
    const std::vector<std::string> prefix = {
        b.result.variant_id, TruthName(b.truth), Cell(m.p0),
        Cell(m.p1),          Cell(m.alpha),      Cell(m.beta),
        Cell(m.gamma),       Cell(m.epsilon),    Cell(m.rate),
        Cell(m.kappa)};
    for (const TrialRecord& r : b.result.trials) {
      std::vector<std::string> row = prefix;
      row.push_back(absl::StrCat(r.trial));
      row.push_back(absl::StrCat(r.tau));
      row.push_back(r.decision.has_value() ? absl::StrCat(*r.decision) : "");
      row.push_back(r.exhausted ? "1" : "0");
      row.push_back(absl::StrCat(r.seed_lo));
      row.push_back(absl::StrCat(r.seed_hi));
      out += CsvLine(row);
    }
  }
  return out;
}

std::string SummaryCsv(const std::vector<ResultBlock>& blocks) {
  std::string out =
      CsvLine({"variant_id", "truth", "n_trials", "n_exhausted", "error_rate",
               "error_ci", "mean_tau", "var_tau", "tau_p5", "tau_p50",
               "tau_p95"});
  for (const ResultBlock& b : blocks) {
    const BatchStats& s = b.result.stats;
    out += CsvLine({b.result.variant_id, TruthName(b.truth),
                    absl::StrCat(s.n_trials), absl::StrCat(s.n_exhausted),
                    Cell(s.error_rate), Cell(s.error_ci_halfwidth),
                    Cell(s.mean_tau), Cell(s.var_tau), Cell(s.tau_p5),
                    Cell(s.tau_p50), Cell(s.tau_p95)});
  }
  return out;
}

std::string FigureCsv(const std::vector<FigureRow>& rows) {
  std::string out = CsvLine({"epsilon", "variant_id", "mean_tau", "tau_p5",
                             "tau_p95", "type1_hat", "type1_ci"});
  for (const FigureRow& r : rows) {
    out += CsvLine({Cell(r.epsilon), r.variant_id, Cell(r.mean_tau),
                    Cell(r.tau_p5), Cell(r.tau_p95), Cell(r.type1_hat),
                    Cell(r.type1_ci)});
  }
  return out;
}

std::vector<std::string> OutputSet::Names() const {
  std::vector<std::string> names;
  for (const auto& [name, contents] : files_) names.push_back(name);
  return names;
}

absl::Status OutputSet::Commit(const std::string& dir) const {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::InternalError(
        absl::StrFormat("cannot create %s: %s", dir, ec.message()));
  }
  std::vector<std::pair<fs::path, fs::path>> staged;
  auto cleanup = [&staged] {
    std::error_code ignored;
    for (const auto& [tmp, final_path] : staged) fs::remove(tmp, ignored);
  };
  for (const auto& [name, contents] : files_) {
    const fs::path final_path = fs::path(dir) / name;
    const fs::path tmp = fs::path(dir) / absl::StrCat(".", name, ".partial");
    staged.emplace_back(tmp, final_path);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << contents;
    out.close();
    if (!out) {
      cleanup();
      return absl::InternalError(
          absl::StrFormat("cannot write %s", tmp.string()));
    }
  }
  for (const auto& [tmp, final_path] : staged) {
    fs::rename(tmp, final_path, ec);
    if (ec) {
      cleanup();
      return absl::InternalError(absl::StrFormat(
          "cannot move %s into place: %s", final_path.string(), ec.message()));
    }
  }
  return absl::OkStatus();
}

}  // namespace dpsprt::cli
