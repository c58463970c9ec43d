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

#include "dpsprt/cli/commands.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "dpsprt/cli/svg_chart.h"
#include "dpsprt/harness.h"
#include "json.hpp"

namespace dpsprt::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json Number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string UtcTimestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

absl::StatusOr<HypothesisPair> Instance(const RunSettings& settings) {
  return HypothesisPair::Create(settings.p0, settings.p1);
}

std::vector<ThresholdPair> GridFor(const RunSettings& settings) {
  return settings.privsprt_grid == "linear"
             ? LinearPrivSprtGrid(settings.alpha, settings.beta)
             : GeometricPrivSprtGrid(settings.alpha, settings.beta);
}

absl::StatusOr<std::vector<ResultBlock>> RunPlanForTruths(
    const RunSettings& settings, const HypothesisPair& hyp,
    const std::vector<PlanVariant>& variants, int64_t trials, uint64_t seed,
    const std::vector<Truth>& truths) {
  std::vector<VariantMeta> metas;
  for (const PlanVariant& v : variants) {
    absl::StatusOr<VariantMeta> meta = DescribeVariant(v);
    if (!meta.ok()) return meta.status();
    metas.push_back(*meta);
  }
  std::vector<ResultBlock> blocks;
  for (const Truth truth : truths) {
    ExperimentPlan plan{.instance = hyp,
                        .truth = truth,
                        .variants = variants,
                        .n_trials = trials,
                        .master_seed = seed};
    absl::StatusOr<std::vector<VariantResult>> results =
        RunExperiment(plan, settings.workers);
    if (!results.ok()) return results.status();
    for (size_t i = 0; i < results->size(); ++i) {
      blocks.push_back(ResultBlock{metas[i], truth, std::move((*results)[i])});
    }
  }
  return blocks;
}

json PlanJson(const RunSettings& settings,
              const std::vector<ResultBlock>& blocks,
              const std::vector<CalibrationRecord>& calibrations) {
  json variants = json::array();
  std::set<std::string> seen;
  for (const ResultBlock& b : blocks) {
    if (!seen.insert(b.result.variant_id).second) continue;
    const VariantMeta& m = b.meta;
    json v = {{"variant_id", b.result.variant_id},
              {"kind", m.kind},
              {"alpha", Number(m.alpha)},
              {"beta", Number(m.beta)},
              {"gamma", Number(m.gamma)},
              {"epsilon", Number(m.epsilon)},
              {"r", Number(m.rate)},
              {"kappa", Number(m.kappa)},
              {"horizon", m.horizon}};
    for (const CalibrationRecord& c : calibrations) {
      if (m.kind == "privsprt" && c.epsilon == m.epsilon) {
        v["thresh_a"] = c.result.chosen.a;
        v["thresh_b"] = c.result.chosen.b;
      }
    }
    variants.push_back(std::move(v));
  }
  json truths = json::array();
  for (const Truth t : settings.truths) truths.push_back(TruthName(t));
  return {{"instance", {settings.p0, settings.p1}},
          {"truths", truths},
          {"n_trials", settings.trials},
          {"master_seed", absl::StrCat(settings.seed)},
          {"variants", variants}};
}

// `formal_guarantee` is false whenever a run used kappa < 1.
std::string ManifestJson(const std::string& command,
                         const RunSettings& settings, json plan,
                         bool formal_guarantee,
                         const std::vector<std::string>& outputs) {
  json kv = json::object();
  for (const auto& [k, v] : SettingsToKeyValues(settings)) kv[k] = v;
  json files = json::array();
  for (const std::string& name : outputs) files.push_back(name);
  files.push_back("manifest.json");
  const json manifest = {{"tool", "dpsprt"},
                         {"version", kToolVersion},
                         {"command", command},
                         {"timestamp", UtcTimestamp()},
                         {"config_path", settings.config_path},
                         {"output_dir", settings.out},
                         {"settings", kv},
                         {"plan", std::move(plan)},
                         {"formal_guarantee", formal_guarantee},
                         {"outputs", files}};
  return manifest.dump(2) + "\n";
}

std::string CalibrationCsv(const std::vector<CalibrationRecord>& records) {
  std::string out =
      CsvLine({"epsilon", "grid", "thresh_a", "thresh_b", "pilot_type1",
               "pilot_type2", "points_evaluated"});
  for (const CalibrationRecord& r : records) {
    out += CsvLine({FormatDouble(r.epsilon), r.grid,
                    FormatDouble(r.result.chosen.a),
                    FormatDouble(r.result.chosen.b),
                    FormatDouble(r.result.pilot_type1),
                    FormatDouble(r.result.pilot_type2),
                    absl::StrCat(r.result.points_evaluated)});
  }
  return out;
}

std::string KappaCsv(const TuneKappaResult& result) {
  std::string out = CsvLine({"epsilon", "kappa", "pilot_type1",
                             "pilot_type2", "feasible", "selected"});
  for (const KappaPilot& p : result.pilots) {
    out += CsvLine({FormatDouble(result.epsilon), FormatDouble(p.kappa),
                    FormatDouble(p.type1), FormatDouble(p.type2),
                    p.feasible ? "1" : "0",
                    p.kappa == result.kappa ? "1" : "0"});
  }
  return out;
}

std::string FigureSvg(const std::vector<FigureRow>& rows) {
  ChartSpec spec{.title = "Mean stopping time under H0",
                 .x_label = "epsilon",
                 .y_label = "tau (mean, 5th-95th percentile)"};
  std::map<std::string, size_t> index;
  for (const FigureRow& r : rows) {
    const std::string kind = r.variant_id.substr(0, r.variant_id.find('@'));
    auto [it, inserted] = index.emplace(kind, spec.series.size());
    if (inserted) spec.series.push_back(ChartSeries{kind, {}});
    spec.series[it->second].points.push_back(
        {r.epsilon, r.mean_tau, r.tau_p5, r.tau_p95});
  }
  return RenderLineChart(spec);
}

int Fail(const absl::Status& status, std::ostream& err) {
  err << "error: " << status.message() << "\n";
  return ExitCodeFor(status);
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return 0;
    case absl::StatusCode::kInvalidArgument:
      return 2;
    case absl::StatusCode::kNotFound:
      return 3;
    default:
      return 1;
  }
}

std::string VariantLabel(const std::string& variant, double epsilon) {
  return absl::StrCat(variant, "@eps=", FormatDouble(epsilon));
}

absl::StatusOr<TestConfig> BuildTestConfig(const RunSettings& settings,
                                           const std::string& variant,
                                           double epsilon) {
  absl::StatusOr<HypothesisPair> hyp = Instance(settings);
  if (!hyp.ok()) return hyp.status();
  Variant v;
  if (variant == "classical") {
    v = ClassicalVariant{};
  } else if (variant == "laplace") {
    v = LaplaceVariant{epsilon};
  } else if (variant == "gaussian") {
    const NoiseSpec g = GaussianForEpsilonDelta(epsilon, settings.delta);
    v = GaussianVariant{g.scale_y, g.scale_z, epsilon};
  } else if (variant == "laplace_sub") {
    v = LaplaceSubVariant{
        epsilon, settings.rate.value_or(DefaultSubsamplingRate(epsilon))};
  } else {
    return absl::InvalidArgumentError(
        absl::StrFormat("'%s' is not a DP-SPRT variant", variant));
  }
  absl::StatusOr<CorrectionParams> correction =
      CorrectionParams::Make(settings.s, settings.kappa);
  if (!correction.ok()) return correction.status();
  TestConfig config{.hypotheses = *hyp,
                    .alpha = settings.alpha,
                    .beta = settings.beta,
                    .gamma = settings.gamma.value_or(DefaultGamma(epsilon)),
                    .variant = v,
                    .correction = *correction,
                    .horizon = settings.horizon,
                    .seed = settings.seed};
  if (absl::StatusOr<DpSprt> test = DpSprt::Create(config); !test.ok()) {
    return test.status();
  }
  return config;
}

absl::StatusOr<SimulationOutput> Simulate(const RunSettings& settings) {
  if (absl::Status s = ValidateSettings(settings); !s.ok()) return s;
  absl::StatusOr<HypothesisPair> hyp = Instance(settings);
  if (!hyp.ok()) return hyp.status();

  SimulationOutput output;
  std::vector<PlanVariant> variants;
  for (const double eps : settings.eps) {
    for (const std::string& name : settings.variants) {
      const std::string label = VariantLabel(name, eps);
      if (name != "privsprt") {
        absl::StatusOr<TestConfig> config =
            BuildTestConfig(settings, name, eps);
        if (!config.ok()) {
          return absl::Status(config.status().code(),
                              absl::StrCat(label, ": ",
                                           config.status().message()));
        }
        variants.push_back(PlanVariant{label, *config});
        continue;
      }
      PrivSprtConfig base = PrivSprtConfig::ForEpsilon(*hyp, eps,
                                                       settings.delta);
      base.horizon = settings.horizon;
      base.alpha = settings.alpha;
      base.beta = settings.beta;
      absl::StatusOr<CalibrationResult> calibration = CalibratePrivSprt(
          base, settings.alpha, settings.beta, GridFor(settings),
          settings.pilot_trials, settings.seed);
      if (!calibration.ok()) {
        return absl::Status(calibration.status().code(),
                            absl::StrCat(label, ": ",
                                         calibration.status().message()));
      }
      base.thresh_a = calibration->chosen.a;
      base.thresh_b = calibration->chosen.b;
      output.calibrations.push_back(
          CalibrationRecord{eps, settings.privsprt_grid, *calibration});
      variants.push_back(PlanVariant{label, base});
    }
  }
  absl::StatusOr<std::vector<ResultBlock>> blocks =
      RunPlanForTruths(settings, *hyp, variants, settings.trials,
                       settings.seed, settings.truths);
  if (!blocks.ok()) return blocks.status();
  output.blocks = *std::move(blocks);
  return output;
}

std::vector<FigureRow> FigureRows(const SimulationOutput& output) {
  std::vector<FigureRow> rows;
  for (const ResultBlock& b : output.blocks) {
    if (b.truth != Truth::kH0) continue;
    const BatchStats& s = b.result.stats;
    const size_t at = b.result.variant_id.find('@');
    rows.push_back(FigureRow{
        .epsilon = b.meta.kind == "classical"
                       ? std::stod(b.result.variant_id.substr(at + 5))
                       : b.meta.epsilon,
        .variant_id = b.result.variant_id,
        .mean_tau = s.mean_tau,
        .tau_p5 = s.tau_p5,
        .tau_p95 = s.tau_p95,
        .type1_hat = s.error_rate,
        .type1_ci = s.error_ci_halfwidth,
    });
  }
  return rows;
}

absl::StatusOr<std::vector<BoundsRow>> Bounds(const RunSettings& settings) {
  if (absl::Status s = ValidateSettings(settings); !s.ok()) return s;
  absl::StatusOr<HypothesisPair> hyp = Instance(settings);
  if (!hyp.ok()) return hyp.status();
  std::vector<BoundsRow> rows;
  if (!settings.eps_given) {
    absl::StatusOr<std::pair<double, double>> lower =
        LowerBound(*hyp, settings.alpha, settings.beta,
                   std::numeric_limits<double>::infinity());
    if (!lower.ok()) return lower.status();
    BoundReport report{.lower_h0 = lower->first,
                       .lower_h1 = lower->second,
                       .upper_h0 = kNaN,
                       .upper_h1 = kNaN,
                       .closed_upper_h0 = kNaN,
                       .closed_upper_h1 = kNaN,
                       .gamma_used = kNaN,
                       .epsilon_used = std::numeric_limits<double>::infinity(),
                       .s_used = settings.s};
    rows.push_back(BoundsRow{"none", false, kNaN, report});
    return rows;
  }
  for (const double eps : settings.eps) {
    if (!(settings.alpha + settings.beta < 1.0)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "alpha + beta must be below 1, got %g",
          settings.alpha + settings.beta));
    }
    absl::StatusOr<TestConfig> config =
        BuildTestConfig(settings, settings.variant, eps);
    if (!config.ok()) return config.status();
    absl::StatusOr<BoundReport> report = ComputeBoundReport(*config);
    if (!report.ok()) return report.status();
    rows.push_back(BoundsRow{settings.variant, true, eps, *report});
  }
  return rows;
}

std::string BoundsCsv(const std::vector<BoundsRow>& rows) {
  std::string out =
      CsvLine({"variant", "epsilon", "gamma", "s", "lower_h0", "lower_h1",
               "upper_h0", "upper_h1", "closed_upper_h0", "closed_upper_h1"});
  for (const BoundsRow& r : rows) {
    const BoundReport& b = r.report;
    out += CsvLine({r.variant, FormatDouble(r.epsilon),
                    FormatDouble(b.gamma_used), FormatDouble(b.s_used),
                    FormatDouble(b.lower_h0), FormatDouble(b.lower_h1),
                    FormatDouble(b.upper_h0), FormatDouble(b.upper_h1),
                    FormatDouble(b.closed_upper_h0),
                    FormatDouble(b.closed_upper_h1)});
  }
  return out;
}

absl::StatusOr<TuneKappaResult> TuneKappa(const RunSettings& settings) {
  if (absl::Status s = ValidateSettings(settings); !s.ok()) return s;
  if (!settings.eps_given || settings.eps.size() != 1) {
    return absl::InvalidArgumentError(
        "eps: tune-kappa needs exactly one epsilon");
  }
  if (settings.variant == "classical") {
    return absl::InvalidArgumentError(
        "variant: the classical test has no correction to tune");
  }
  absl::StatusOr<HypothesisPair> hyp = Instance(settings);
  if (!hyp.ok()) return hyp.status();

  TuneKappaResult result{.epsilon = settings.eps.front()};
  std::vector<double> grid = settings.kappa_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const uint64_t pilot_seed =
      RandomStream({settings.seed, 0, 0, Substream::kPilot}).NextU64();
  std::optional<double> chosen;
  for (const double kappa : grid) {
    RunSettings at = settings;
    at.kappa = kappa;
    absl::StatusOr<TestConfig> config =
        BuildTestConfig(at, settings.variant, result.epsilon);
    if (!config.ok()) return config.status();
    // One stream label for every kappa: the pilots share their randomness.
    absl::StatusOr<std::vector<ResultBlock>> blocks = RunPlanForTruths(
        at, *hyp, {PlanVariant{"kappa-pilot", *config}},
        settings.kappa_pilot_trials, pilot_seed, {Truth::kH0, Truth::kH1});
    if (!blocks.ok()) return blocks.status();
    KappaPilot pilot{.kappa = kappa,
                     .type1 = (*blocks)[0].result.stats.error_rate,
                     .type2 = (*blocks)[1].result.stats.error_rate};
    pilot.feasible =
        pilot.type1 <= settings.alpha && pilot.type2 <= settings.beta;
    if (pilot.feasible && !chosen.has_value()) chosen = kappa;
    result.pilots.push_back(pilot);
  }
  if (!chosen.has_value()) {
    return absl::NotFoundError(absl::StrFormat(
        "no kappa in {%s} kept the pilot errors within alpha=%g beta=%g",
        absl::StrJoin(grid, ", "), settings.alpha, settings.beta));
  }
  result.kappa = *chosen;

  RunSettings confirm = settings;
  confirm.kappa = result.kappa;
  absl::StatusOr<TestConfig> config =
      BuildTestConfig(confirm, settings.variant, result.epsilon);
  if (!config.ok()) return config.status();
  absl::StatusOr<std::vector<ResultBlock>> blocks = RunPlanForTruths(
      confirm, *hyp,
      {PlanVariant{VariantLabel(settings.variant, result.epsilon), *config}},
      settings.trials, settings.seed, {Truth::kH0, Truth::kH1});
  if (!blocks.ok()) return blocks.status();
  result.confirmation = *std::move(blocks);
  return result;
}

int RunCommand(const std::string& command, const RunSettings& settings,
               std::ostream& out, std::ostream& err) {
  if (settings.workers > 0) omp_set_num_threads(settings.workers);
  OutputSet files;
  json plan;
  bool formal_guarantee = settings.kappa >= 1.0;

  if (command == "simulate" || command == "compare") {
    absl::StatusOr<SimulationOutput> sim = Simulate(settings);
    if (!sim.ok()) return Fail(sim.status(), err);
    files.Add("trials.csv", PerTrialCsv(sim->blocks));
    files.Add("summary.csv", SummaryCsv(sim->blocks));
    if (!sim->calibrations.empty()) {
      files.Add("calibration.csv", CalibrationCsv(sim->calibrations));
    }
    if (command == "compare") {
      const std::vector<FigureRow> rows = FigureRows(*sim);
      files.Add("figure.csv", FigureCsv(rows));
      if (settings.svg) files.Add("figure.svg", FigureSvg(rows));
    }
    plan = PlanJson(settings, sim->blocks, sim->calibrations);
    out << SummaryCsv(sim->blocks);
    if (!formal_guarantee) {
      err << "warning: kappa < 1 voids the formal error guarantee of the "
             "private variants\n";
    }
  } else if (command == "bounds") {
    absl::StatusOr<std::vector<BoundsRow>> rows = Bounds(settings);
    if (!rows.ok()) return Fail(rows.status(), err);
    const std::string csv = BoundsCsv(*rows);
    out << csv;
    if (settings.out.empty()) return 0;
    files.Add("bounds.csv", csv);
    plan = {{"instance", {settings.p0, settings.p1}}};
  } else if (command == "tune-kappa") {
    absl::StatusOr<TuneKappaResult> tuned = TuneKappa(settings);
    if (!tuned.ok()) return Fail(tuned.status(), err);
    files.Add("kappa.csv", KappaCsv(*tuned));
    files.Add("confirmation.csv", SummaryCsv(tuned->confirmation));
    plan = PlanJson(settings, tuned->confirmation, {});
    out << absl::StrFormat("selected kappa = %s\n",
                           FormatDouble(tuned->kappa));
    out << SummaryCsv(tuned->confirmation);
    formal_guarantee = tuned->kappa >= 1.0;
    if (!formal_guarantee) {
      err << "warning: kappa < 1 voids the formal error guarantee; only "
             "kappa = 1 is certified\n";
    }
  } else {
    return Fail(absl::InvalidArgumentError(
                    absl::StrFormat("unknown command '%s'", command)),
                err);
  }

  const std::string dir = settings.out.empty() ? "results" : settings.out;
  RunSettings recorded = settings;
  recorded.out = dir;
  files.Add("manifest.json",
            ManifestJson(command, recorded, std::move(plan),
                         formal_guarantee, files.Names()));
  if (absl::Status s = files.Commit(dir); !s.ok()) return Fail(s, err);
  err << "wrote " << files.files().size() << " files to " << dir << "\n";
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Differentially private sequential tests: simulation, bounds "
               "and calibration"};
  app.require_subcommand(1);

  std::string config_path;
  std::string manifest_path;
  std::string out_dir;
  std::vector<std::pair<std::string, std::string>> overrides;

  const std::vector<std::pair<std::string, std::string>> flags = {
      {"seed", "Master seed (u64); falls back to $DPSPRT_SEED"},
      {"workers", "Worker threads (0 = all cores)"},
      {"trials", "Trials per variant and truth"},
      {"eps", "Comma-separated privacy levels"},
      {"alpha", "Type I error target"},
      {"beta", "Type II error target"},
      {"gamma", "Error split, number or 'auto'"},
      {"rate", "Subsampling rate, number or 'auto'"},
      {"s", "Exponent of the union bound schedule"},
      {"kappa", "Correction multiplier in (0, 1]"},
      {"horizon", "Maximum samples per run"},
      {"p0", "Mean under H0"},
      {"p1", "Mean under H1"},
      {"delta", "delta of the Gaussian scales"},
      {"variants", "Comma-separated variants"},
      {"variant", "Variant for bounds and tune-kappa"},
      {"truth", "H0, H1 or both"},
      {"pilot-trials", "Baseline calibration runs per hypothesis"},
      {"privsprt-grid", "Baseline threshold grid: geometric or linear"},
      {"kappa-grid", "Comma-separated kappa candidates"},
      {"kappa-pilot-trials", "kappa pilot runs per hypothesis"},
      {"svg", "Also write an SVG chart (true/false)"},
  };

  std::string command;
  for (const char* name : {"simulate", "bounds", "compare", "tune-kappa"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "Flat key = value config file");
    sub->add_option("--manifest", manifest_path,
                    "Rerun the settings recorded in a manifest");
    sub->add_option("--out", out_dir, "Output directory");
    for (const auto& [flag, help] : flags) {
      sub->add_option_function<std::string>(
          "--" + flag,
          [&overrides, key = flag](const std::string& value) {
            overrides.emplace_back(key, value);
          },
          help);
    }
    sub->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunSettings settings;
  if (!config_path.empty()) {
    if (absl::Status s = ApplyConfigFile(settings, config_path); !s.ok()) {
      return Fail(s, std::cerr);
    }
  }
  if (!manifest_path.empty()) {
    std::ifstream in(manifest_path);
    json manifest = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (manifest.is_discarded() || !manifest.contains("settings")) {
      return Fail(absl::InvalidArgumentError(absl::StrFormat(
                      "%s: not a dpsprt manifest", manifest_path)),
                  std::cerr);
    }
    if (manifest.value("command", "") != command) {
      return Fail(absl::InvalidArgumentError(absl::StrFormat(
                      "%s: recorded command is '%s', not '%s'", manifest_path,
                      manifest.value("command", ""), command)),
                  std::cerr);
    }
    for (const auto& [key, value] : manifest["settings"].items()) {
      if (absl::Status s =
              ApplySetting(settings, key, value.get<std::string>(),
                           absl::StrCat(manifest_path, ": settings.", key));
          !s.ok()) {
        return Fail(s, std::cerr);
      }
    }
    settings.config_path = manifest.value("config_path", "");
  }
  for (const auto& [key, value] : overrides) {
    if (absl::Status s = ApplySetting(settings, key, value, "--" + key);
        !s.ok()) {
      return Fail(s, std::cerr);
    }
  }
  if (absl::Status s = ApplySeedFallback(settings); !s.ok()) {
    return Fail(s, std::cerr);
  }
  settings.out = out_dir;
  return RunCommand(command, settings, std::cout, std::cerr);
}

}  // namespace dpsprt::cli
