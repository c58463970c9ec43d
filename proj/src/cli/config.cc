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

#include "dpsprt/cli/config.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace dpsprt::cli {
namespace {

absl::Status Bad(const std::string& where, const std::string& message) {
  return absl::InvalidArgumentError(absl::StrCat(where, ": ", message));
}

absl::StatusOr<double> ParseDouble(const std::string& where,
                                   const std::string& key,
                                   absl::string_view value) {
  double out = 0.0;
  if (!absl::SimpleAtod(absl::StripAsciiWhitespace(value), &out)) {
    return Bad(where, absl::StrFormat("%s: '%s' is not a number", key, value));
  }
  return out;
}

absl::StatusOr<int64_t> ParseInt(const std::string& where,
                                 const std::string& key,
                                 absl::string_view value) {
  int64_t out = 0;
  if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(value), &out)) {
    return Bad(where,
               absl::StrFormat("%s: '%s' is not an integer", key, value));
  }
  return out;
}

absl::StatusOr<bool> ParseBool(const std::string& where, const std::string& key,
                               absl::string_view value) {
  bool out = false;
  if (!absl::SimpleAtob(absl::StripAsciiWhitespace(value), &out)) {
    return Bad(where, absl::StrFormat("%s: '%s' is not a boolean", key, value));
  }
  return out;
}

std::vector<std::string> SplitList(absl::string_view value) {
  std::vector<std::string> items;
  for (absl::string_view item :
       absl::StrSplit(value, ',', absl::SkipWhitespace())) {
    items.emplace_back(absl::StripAsciiWhitespace(item));
  }
  return items;
}

absl::StatusOr<std::vector<double>> ParseDoubleList(const std::string& where,
                                                    const std::string& key,
                                                    absl::string_view value) {
  std::vector<double> out;
  for (const std::string& item : SplitList(value)) {
    absl::StatusOr<double> d = ParseDouble(where, key, item);
    if (!d.ok()) return d.status();
    out.push_back(*d);
  }
  if (out.empty()) return Bad(where, absl::StrCat(key, ": empty list"));
  return out;
}

// "auto" or a number.
absl::StatusOr<std::optional<double>> ParseAuto(const std::string& where,
                                                const std::string& key,
                                                absl::string_view value) {
  if (absl::StripAsciiWhitespace(value) == "auto") return std::nullopt;
  absl::StatusOr<double> d = ParseDouble(where, key, value);
  if (!d.ok()) return d.status();
  return std::optional<double>(*d);
}

std::string DoubleList(const std::vector<double>& values) {
  return absl::StrJoin(values, ",", [](std::string* out, double v) {
    out->append(FormatDouble(v));
  });
}

template <typename T>
absl::Status Assign(absl::StatusOr<T> parsed, T& field) {
  if (!parsed.ok()) return parsed.status();
  field = *std::move(parsed);
  return absl::OkStatus();
}

}  // namespace

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

absl::Status ApplySetting(RunSettings& settings, const std::string& raw_key,
                          const std::string& value, const std::string& where) {
  const std::string key = absl::StrReplaceAll(
      absl::AsciiStrToLower(absl::StripAsciiWhitespace(raw_key)), {{"-", "_"}});
  const std::string v(absl::StripAsciiWhitespace(value));

  if (key == "p0") return Assign(ParseDouble(where, key, v), settings.p0);
  if (key == "p1") return Assign(ParseDouble(where, key, v), settings.p1);
  if (key == "alpha") return Assign(ParseDouble(where, key, v), settings.alpha);
  if (key == "beta") return Assign(ParseDouble(where, key, v), settings.beta);
  if (key == "s") return Assign(ParseDouble(where, key, v), settings.s);
  if (key == "kappa") return Assign(ParseDouble(where, key, v), settings.kappa);
  if (key == "delta") return Assign(ParseDouble(where, key, v), settings.delta);
  if (key == "trials") return Assign(ParseInt(where, key, v), settings.trials);
  if (key == "horizon") {
    return Assign(ParseInt(where, key, v), settings.horizon);
  }
  if (key == "pilot_trials") {
    return Assign(ParseInt(where, key, v), settings.pilot_trials);
  }
  if (key == "kappa_pilot_trials") {
    return Assign(ParseInt(where, key, v), settings.kappa_pilot_trials);
  }
  if (key == "svg") return Assign(ParseBool(where, key, v), settings.svg);
  if (key == "gamma") return Assign(ParseAuto(where, key, v), settings.gamma);
  if (key == "rate") return Assign(ParseAuto(where, key, v), settings.rate);
  if (key == "eps") {
    settings.eps_given = true;
    return Assign(ParseDoubleList(where, key, v), settings.eps);
  }
  if (key == "kappa_grid") {
    return Assign(ParseDoubleList(where, key, v), settings.kappa_grid);
  }
  if (key == "workers") {
    absl::StatusOr<int64_t> w = ParseInt(where, key, v);
    if (!w.ok()) return w.status();
    if (*w < 0 || *w > 4096) {
      return Bad(where, absl::StrFormat("workers: %d is out of range", *w));
    }
    settings.workers = static_cast<int>(*w);
    return absl::OkStatus();
  }
  if (key == "seed") {
    uint64_t seed = 0;
    if (!absl::SimpleAtoi(v, &seed)) {
      return Bad(where, absl::StrFormat("seed: '%s' is not a u64", v));
    }
    settings.seed = seed;
    settings.seed_given = true;
    return absl::OkStatus();
  }
  if (key == "variants") {
    std::vector<std::string> items = SplitList(v);
    if (items.empty()) return Bad(where, "variants: empty list");
    for (const std::string& item : items) {
      if (item != "classical" && item != "privsprt" && item != "laplace" &&
          item != "gaussian" && item != "laplace_sub") {
        return Bad(where, absl::StrFormat("variants: unknown variant '%s'",
                                          item));
      }
    }
    settings.variants = std::move(items);
    return absl::OkStatus();
  }
  if (key == "variant") {
    if (v != "classical" && v != "laplace" && v != "gaussian" &&
        v != "laplace_sub") {
      return Bad(where, absl::StrFormat("variant: unknown variant '%s'", v));
    }
    settings.variant = v;
    return absl::OkStatus();
  }
  if (key == "truth") {
    std::vector<Truth> truths;
    for (const std::string& item : SplitList(v)) {
      if (item == "H0" || item == "h0") {
        truths.push_back(Truth::kH0);
      } else if (item == "H1" || item == "h1") {
        truths.push_back(Truth::kH1);
      } else if (item == "both") {
        truths.insert(truths.end(), {Truth::kH0, Truth::kH1});
      } else {
        return Bad(where, absl::StrFormat("truth: '%s' is not H0, H1 or both",
                                          item));
      }
    }
    if (truths.empty()) return Bad(where, "truth: empty list");
    settings.truths = std::move(truths);
    return absl::OkStatus();
  }
  if (key == "privsprt_grid") {
    if (v != "geometric" && v != "linear") {
      return Bad(where, absl::StrFormat(
                            "privsprt_grid: '%s' is not geometric or linear",
                            v));
    }
    settings.privsprt_grid = v;
    return absl::OkStatus();
  }
  return Bad(where, absl::StrFormat("unknown key '%s'", raw_key));
}

absl::Status ApplyConfigFile(RunSettings& settings, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s: cannot open config file", path));
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = absl::StrFormat("%s:%d", path, line_no);
    absl::string_view content = line;
    if (const size_t hash = content.find('#'); hash != content.npos) {
      content = content.substr(0, hash);
    }
    content = absl::StripAsciiWhitespace(content);
    if (content.empty()) continue;
    const size_t eq = content.find('=');
    if (eq == content.npos) {
      return Bad(where, "expected 'key = value'");
    }
    const std::string key(absl::StripAsciiWhitespace(content.substr(0, eq)));
    const std::string value(absl::StripAsciiWhitespace(content.substr(eq + 1)));
    if (key.empty()) return Bad(where, "missing key");
    if (absl::Status s = ApplySetting(settings, key, value, where); !s.ok()) {
      return s;
    }
  }
  settings.config_path = path;
  return absl::OkStatus();
}

std::map<std::string, std::string> SettingsToKeyValues(
    const RunSettings& settings) {
  std::map<std::string, std::string> kv;
  kv["p0"] = FormatDouble(settings.p0);
  kv["p1"] = FormatDouble(settings.p1);
  kv["alpha"] = FormatDouble(settings.alpha);
  kv["beta"] = FormatDouble(settings.beta);
  if (settings.eps_given) kv["eps"] = DoubleList(settings.eps);
  kv["trials"] = absl::StrCat(settings.trials);
  kv["seed"] = absl::StrCat(settings.seed);
  kv["workers"] = absl::StrCat(settings.workers);
  kv["gamma"] = settings.gamma ? FormatDouble(*settings.gamma) : "auto";
  kv["rate"] = settings.rate ? FormatDouble(*settings.rate) : "auto";
  kv["s"] = FormatDouble(settings.s);
  kv["kappa"] = FormatDouble(settings.kappa);
  kv["horizon"] = absl::StrCat(settings.horizon);
  kv["delta"] = FormatDouble(settings.delta);
  kv["variants"] = absl::StrJoin(settings.variants, ",");
  kv["truth"] = absl::StrJoin(settings.truths, ",",
                              [](std::string* out, Truth t) {
                                out->append(TruthName(t));
                              });
  kv["pilot_trials"] = absl::StrCat(settings.pilot_trials);
  kv["privsprt_grid"] = settings.privsprt_grid;
  kv["kappa_grid"] = DoubleList(settings.kappa_grid);
  kv["kappa_pilot_trials"] = absl::StrCat(settings.kappa_pilot_trials);
  kv["variant"] = settings.variant;
  kv["svg"] = settings.svg ? "true" : "false";
  return kv;
}

absl::Status ApplySeedFallback(RunSettings& settings) {
  if (settings.seed_given) return absl::OkStatus();
  const char* env = std::getenv("DPSPRT_SEED");
  if (env == nullptr) return absl::OkStatus();
  return ApplySetting(settings, "seed", env, "DPSPRT_SEED");
}

absl::Status ValidateSettings(const RunSettings& s) {
  auto prob = [](double x) { return x > 0.0 && x < 1.0; };
  if (!prob(s.p0) || !prob(s.p1) || !(s.p0 < s.p1)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "p0, p1: need 0 < p0 < p1 < 1, got %g and %g", s.p0, s.p1));
  }
  if (!prob(s.alpha) || !prob(s.beta)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "alpha, beta: must lie in (0, 1), got %g and %g", s.alpha, s.beta));
  }
  for (const double e : s.eps) {
    if (!(e > 0.0) || !std::isfinite(e)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("eps: values must be positive, got %g", e));
    }
  }
  if (s.trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("trials: must be positive, got %d", s.trials));
  }
  if (s.horizon < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("horizon: must be positive, got %d", s.horizon));
  }
  if (s.gamma && !prob(*s.gamma)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("gamma: must lie in (0, 1), got %g", *s.gamma));
  }
  if (s.rate && !(*s.rate > 0.0 && *s.rate <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("rate: must lie in (0, 1], got %g", *s.rate));
  }
  if (!(s.s > 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("s: must exceed 1, got %g", s.s));
  }
  if (!(s.kappa > 0.0 && s.kappa <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("kappa: must lie in (0, 1], got %g", s.kappa));
  }
  for (const double k : s.kappa_grid) {
    if (!(k > 0.0 && k <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("kappa_grid: values must lie in (0, 1], got %g", k));
    }
  }
  if (!prob(s.delta)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta: must lie in (0, 1), got %g", s.delta));
  }
  if (s.pilot_trials < 1 || s.kappa_pilot_trials < 1) {
    return absl::InvalidArgumentError("pilot trial counts must be positive");
  }
  return absl::OkStatus();
}

}  // namespace dpsprt::cli
