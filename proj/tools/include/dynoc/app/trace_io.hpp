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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynoc/experiments.hpp"

namespace dynoc::app {

/// Shortest text that reads back to the same double (17 significant digits).
std::string format_double(double v);
double parse_number(const std::string& text);

/// A trace file in memory: a header and one row per round.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::ptrdiff_t column(const std::string& name) const;  // −1 when absent
  bool operator==(const Table&) const = default;
};

/// Columns t, loss, then regret, w_<label>… and alpha_error when present.
Table loss_table(const AlgorithmTrace& trace);
/// Columns t, theta_0 … theta_{d−1}; empty when nothing was recorded.
Table prediction_table(const AlgorithmTrace& trace);

std::string render_csv(const Table& table);
/// Throws InputError unless the header starts with t,loss or t,theta_0,
/// every row has the header's width and t is strictly increasing.
Table parse_csv(const std::string& text, const std::string& origin);
Table read_csv(const std::filesystem::path& path);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

std::string render_key_values(const KeyValues& kv);
KeyValues parse_key_values(const std::string& text, const std::string& origin);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

std::string trace_file_name(const std::string& experiment, std::uint64_t seed, const std::string& algorithm);
std::string prediction_file_name(const std::string& experiment, std::uint64_t seed,
                                 const std::string& algorithm);

struct TraceName {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string algorithm;
};

/// Inverse of trace_file_name; nullopt for other names.
std::optional<TraceName> parse_trace_name(const std::string& filename);

/// Per-trace statistics: rounds, mean_loss, loss_<start>_<end> for each
/// interval inside the run, and final_regret, regret_over_sqrt_t and
/// final_alpha_error when the columns exist.
std::vector<std::pair<std::string, double>> trace_block(const Table& table,
                                                        const std::vector<Interval>& intervals);

}  // namespace dynoc::app
