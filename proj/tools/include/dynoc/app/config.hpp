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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dynoc/experiments.hpp"

namespace dynoc::app {

/// Everything `dynoc run` needs. Unset optionals fall back to the
/// experiment's desk defaults; `lambda` and `eta_r` unset means "auto".
struct RunConfig {
  std::string experiment = "a";
  std::optional<std::size_t> horizon;
  std::vector<std::uint64_t> seeds = {1};

  // a
  std::optional<Eigen::Index> p;
  std::optional<Eigen::Index> q;
  std::optional<double> missing_rate;
  std::optional<std::vector<Interval>> anomalies;
  // b
  std::optional<Eigen::Index> rows;
  std::optional<Eigen::Index> cols;
  std::optional<Eigen::Index> measurements;
  std::optional<std::size_t> switch_at;
  std::optional<double> tau_reg;
  std::optional<std::size_t> m;
  std::optional<double> lambda;
  std::optional<double> eta_r;
  std::optional<bool> baselines;
  // c
  std::optional<Eigen::Index> d;
  std::optional<double> rho0;
  // custom
  std::optional<double> gamma;
  std::optional<double> grid_min;
  std::optional<double> grid_max;
  std::optional<std::size_t> budget;
  // shared
  std::optional<double> eta0;

  std::string out_dir = "traces";
  std::size_t workers = 1;
  std::size_t stride = 0;

  bool operator==(const RunConfig&) const = default;
};

/// Keys accepted by `set`, in render order.
const std::vector<std::string>& config_keys();

/// Assigns one key from its text form. Throws ConfigError naming the key.
void set(RunConfig& config, std::string_view key, std::string_view value);

/// Throws ConfigError when a field is out of range or set for an
/// experiment it does not apply to.
void validate(const RunConfig& config);

/// `key = value` lines; unset optional fields are omitted.
std::string render(const RunConfig& config);

/// Inverse of render. Blank lines and `#` comments are skipped;
/// unknown keys and repeated keys are rejected.
RunConfig parse(std::string_view text);

RunConfig load(const std::string& path);

std::vector<std::uint64_t> parse_seeds(std::string_view text);
std::vector<Interval> parse_intervals(std::string_view text);
std::string format_intervals(const std::vector<Interval>& intervals);

std::size_t horizon_of(const RunConfig& config);

/// Default anomalies are dropped when they do not fit in a shorter run;
/// explicit ones are kept and validated by the experiment.
TextureConfig texture_config(const RunConfig& config);
CSVideoConfig cs_config(const RunConfig& config);
HawkesConfig hawkes_config(const RunConfig& config);
GridToyConfig grid_config(const RunConfig& config);

}  // namespace dynoc::app
