// Copyright 2026 The dynoc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dynoc/app/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "dynoc/app/trace_io.hpp"

namespace dynoc::app {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class Int>
Int parse_int(std::string_view key, std::string_view text) {
  Int value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

double parse_double(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError(std::string(key) + ": expected a finite number, got '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(text) + "'");
}

struct Field {
  std::string key;
  std::vector<std::string> experiments;  // empty: applies to all
  std::function<void(RunConfig&, std::string_view)> assign;
  std::function<std::optional<std::string>(const RunConfig&)> show;
};

template <class T>
std::optional<std::string> show_opt(const std::optional<T>& v) {
  if (!v) return std::nullopt;
  if constexpr (std::is_same_v<T, double>) {
    return format_double(*v);
  } else if constexpr (std::is_same_v<T, bool>) {
    return *v ? "true" : "false";
  } else {
    return std::to_string(*v);
  }
}

template <class T>
Field number_field(std::string key, std::optional<T> RunConfig::*member, std::vector<std::string> experiments = {}) {
  return Field{key, std::move(experiments),
               [key, member](RunConfig& c, std::string_view v) {
                 if constexpr (std::is_floating_point_v<T>) {
                   c.*member = parse_double(key, v);
                 } else {
                   c.*member = parse_int<T>(key, v);
                 }
               },
               [member](const RunConfig& c) { return show_opt(c.*member); }};
}

// Unset means the value is derived from the switch bound.
Field auto_field(std::string key, std::optional<double> RunConfig::*member) {
  return Field{key, {"b"},
               [key, member](RunConfig& c, std::string_view v) {
                 if (v == "auto") {
                   (c.*member).reset();
                 } else {
                   c.*member = parse_double(key, v);
                 }
               },
               [member](const RunConfig& c) { return show_opt(c.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      Field{"experiment", {}, [](RunConfig& c, std::string_view v) { c.experiment = std::string(v); },
            [](const RunConfig& c) { return std::optional<std::string>(c.experiment); }},
      number_field("T", &RunConfig::horizon),
      Field{"seeds", {}, [](RunConfig& c, std::string_view v) { c.seeds = parse_seeds(v); },
            [](const RunConfig& c) {
              std::string out;
              for (std::size_t i = 0; i < c.seeds.size(); ++i) out += (i ? "," : "") + std::to_string(c.seeds[i]);
              return std::optional<std::string>(out);
            }},
      number_field("p", &RunConfig::p, {"a"}),
      number_field("q", &RunConfig::q, {"a"}),
      number_field("missing_rate", &RunConfig::missing_rate, {"a"}),
      Field{"anomalies", {"a"}, [](RunConfig& c, std::string_view v) { c.anomalies = parse_intervals(v); },
            [](const RunConfig& c) {
              return c.anomalies ? std::optional<std::string>(format_intervals(*c.anomalies)) : std::nullopt;
            }},
      number_field("rows", &RunConfig::rows, {"b"}),
      number_field("cols", &RunConfig::cols, {"b"}),
      number_field("measurements", &RunConfig::measurements, {"b"}),
      number_field("switch_at", &RunConfig::switch_at, {"b"}),
      number_field("tau_reg", &RunConfig::tau_reg, {"b"}),
      number_field("m", &RunConfig::m, {"b"}),
      auto_field("lambda", &RunConfig::lambda),
      auto_field("eta_r", &RunConfig::eta_r),
      Field{"baselines", {"b"}, [](RunConfig& c, std::string_view v) { c.baselines = parse_bool("baselines", v); },
            [](const RunConfig& c) { return show_opt(c.baselines); }},
      number_field("d", &RunConfig::d, {"c"}),
      number_field("rho0", &RunConfig::rho0, {"c"}),
      number_field("gamma", &RunConfig::gamma, {"custom"}),
      number_field("grid_min", &RunConfig::grid_min, {"custom"}),
      number_field("grid_max", &RunConfig::grid_max, {"custom"}),
      number_field("budget", &RunConfig::budget, {"custom"}),
      number_field("eta0", &RunConfig::eta0),
      Field{"out_dir", {}, [](RunConfig& c, std::string_view v) { c.out_dir = std::string(v); },
            [](const RunConfig& c) { return std::optional<std::string>(c.out_dir); }},
      Field{"workers", {}, [](RunConfig& c, std::string_view v) { c.workers = parse_int<std::size_t>("workers", v); },
            [](const RunConfig& c) { return std::optional<std::string>(std::to_string(c.workers)); }},
      Field{"stride", {}, [](RunConfig& c, std::string_view v) { c.stride = parse_int<std::size_t>("stride", v); },
            [](const RunConfig& c) { return std::optional<std::string>(std::to_string(c.stride)); }},
  };
  return table;
}

const Field& field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError("unknown key '" + std::string(key) + "'");
}

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(key + ": " + message);
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.push_back(f.key);
    return out;
  }();
  return keys;
}

void set(RunConfig& config, std::string_view key, std::string_view value) {
  field(key).assign(config, trim(value));
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  std::vector<std::uint64_t> out;
  std::string_view rest = trim(text);
  if (rest.empty()) throw ConfigError("seeds: empty list");
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(parse_int<std::uint64_t>("seeds", item));
      continue;
    }
    const auto lo = parse_int<std::uint64_t>("seeds", trim(item.substr(0, dash)));
    const auto hi = parse_int<std::uint64_t>("seeds", trim(item.substr(dash + 1)));
    if (hi < lo) throw ConfigError("seeds: range " + std::string(item) + " is reversed");
    if (hi - lo >= 100'000) throw ConfigError("seeds: range " + std::string(item) + " is too long");
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  }
  return out;
}

std::vector<Interval> parse_intervals(std::string_view text) {
  std::vector<Interval> out;
  std::string_view rest = trim(text);
  if (rest == "none") return out;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) throw ConfigError("anomalies: expected start-end, got '" + std::string(item) + "'");
    out.push_back({parse_int<std::size_t>("anomalies", trim(item.substr(0, dash))),
                   parse_int<std::size_t>("anomalies", trim(item.substr(dash + 1)))});
  }
  return out;
}

std::string format_intervals(const std::vector<Interval>& intervals) {
  if (intervals.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    out += (i ? "," : "") + std::to_string(intervals[i].start) + "-" + std::to_string(intervals[i].end);
  }
  return out;
}

std::size_t horizon_of(const RunConfig& config) {
  if (config.horizon) return *config.horizon;
  if (config.experiment == "a") return TextureConfig{}.horizon;
  if (config.experiment == "b") return CSVideoConfig{}.horizon;
  if (config.experiment == "c") return HawkesConfig{}.horizon;
  return GridToyConfig{}.horizon;
}

void validate(const RunConfig& c) {
  static const std::set<std::string> experiments = {"a", "b", "c", "custom"};
  require(experiments.count(c.experiment) == 1, "experiment", "expected a, b, c or custom, got '" + c.experiment + "'");
  for (const auto& f : fields()) {
    if (f.experiments.empty() || !f.show(c)) continue;
    require(std::find(f.experiments.begin(), f.experiments.end(), c.experiment) != f.experiments.end(), f.key,
            "does not apply to experiment " + c.experiment);
  }
  const std::size_t T = horizon_of(c);
  require(T >= (c.experiment == "c" ? 3 : 2), "T", "too short for experiment " + c.experiment);
  require(!c.seeds.empty(), "seeds", "empty list");
  require(std::set<std::uint64_t>(c.seeds.begin(), c.seeds.end()).size() == c.seeds.size(), "seeds",
          "duplicate seed");
  for (const auto& [key, v] : {std::pair{"p", c.p}, {"q", c.q}, {"rows", c.rows}, {"cols", c.cols},
                               {"measurements", c.measurements}, {"d", c.d}}) {
    require(!v || *v >= 1, key, "must be >= 1");
  }
  require(!c.missing_rate || (*c.missing_rate >= 0.0 && *c.missing_rate < 1.0), "missing_rate", "must be in [0, 1)");
  if (c.anomalies) {
    try {
      validate_intervals(*c.anomalies, T);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("anomalies: ") + e.what());
    }
  }
  require(!c.switch_at || (*c.switch_at >= 1 && *c.switch_at < T), "switch_at", "must be in [1, T)");
  require(!c.tau_reg || *c.tau_reg >= 0.0, "tau_reg", "must be >= 0");
  require(!c.m || *c.m + 2 <= T, "m", "must be <= T - 2");
  require(!c.lambda || (*c.lambda >= 0.0 && *c.lambda <= 1.0), "lambda", "must be in [0, 1]");
  require(!c.eta_r || *c.eta_r > 0.0, "eta_r", "must be > 0");
  require(!c.rho0 || *c.rho0 >= 0.0, "rho0", "must be >= 0");
  require(!c.gamma || *c.gamma > 0.0, "gamma", "must be > 0");
  require(!c.budget || *c.budget >= 1, "budget", "must be >= 1");
  const double lo = c.grid_min.value_or(GridToyConfig{}.a_min);
  const double hi = c.grid_max.value_or(GridToyConfig{}.a_max);
  require(lo < hi, "grid_max", "must exceed grid_min");
  require(!c.eta0 || *c.eta0 > 0.0, "eta0", "must be > 0");
  require(!c.eta0 || c.experiment != "c" || *c.eta0 <= 1.0, "eta0", "must be <= 1 for experiment c");
  require(!c.out_dir.empty(), "out_dir", "must not be empty");
  require(c.workers >= 1, "workers", "must be >= 1");
}

std::string render(const RunConfig& config) {
  std::string out;
  for (const auto& f : fields()) {
    if (const auto v = f.show(config)) out += f.key + " = " + *v + "\n";
  }
  return out;
}

RunConfig parse(std::string_view text) {
  RunConfig config;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(line_no) + ": repeated key '" + key + "'");
    set(config, key, line.substr(eq + 1));
  }
  return config;
}

RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

TextureConfig texture_config(const RunConfig& c) {
  TextureConfig out;
  out.horizon = horizon_of(c);
  out.p = c.p.value_or(out.p);
  out.q = c.q.value_or(out.q);
  out.missing_rate = c.missing_rate.value_or(out.missing_rate);
  if (c.anomalies) {
    out.anomalies = *c.anomalies;
  } else {
    std::erase_if(out.anomalies, [&](const Interval& iv) { return iv.end > out.horizon; });
  }
  out.eta0 = c.eta0.value_or(out.eta0);
  out.stride = c.stride;
  return out;
}

CSVideoConfig cs_config(const RunConfig& c) {
  CSVideoConfig out;
  const std::size_t default_switch = out.switch_at;
  const std::size_t default_horizon = out.horizon;
  out.horizon = horizon_of(c);
  // A shorter run keeps the switch at the same fraction of the horizon.
  out.switch_at = c.switch_at.value_or(out.horizon > default_switch ? default_switch
                                                                     : std::max<std::size_t>(1, out.horizon * default_switch / default_horizon));
  out.rows = c.rows.value_or(out.rows);
  out.cols = c.cols.value_or(out.cols);
  out.measurements = c.measurements.value_or(out.measurements);
  out.tau_reg = c.tau_reg.value_or(out.tau_reg);
  out.switches = c.m.value_or(out.switches);
  out.lambda = c.lambda;
  out.eta_r = c.eta_r;
  out.baselines = c.baselines.value_or(out.baselines);
  out.eta0 = c.eta0.value_or(out.eta0);
  out.stride = c.stride;
  return out;
}

HawkesConfig hawkes_config(const RunConfig& c) {
  HawkesConfig out;
  out.horizon = horizon_of(c);
  out.d = c.d.value_or(out.d);
  out.rho0 = c.rho0.value_or(out.rho0);
  out.eta0 = c.eta0.value_or(out.eta0);
  out.stride = c.stride;
  return out;
}

GridToyConfig grid_config(const RunConfig& c) {
  GridToyConfig out;
  out.horizon = horizon_of(c);
  out.gamma = c.gamma.value_or(out.gamma);
  out.a_min = c.grid_min.value_or(out.a_min);
  out.a_max = c.grid_max.value_or(out.a_max);
  out.budget = c.budget.value_or(out.budget);
  out.eta0 = c.eta0.value_or(out.eta0);
  return out;
}

}  // namespace dynoc::app
