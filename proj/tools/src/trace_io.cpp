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

#include "dynoc/app/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace dynoc::app {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string strip(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (ec != std::errc()) throw InternalError("format_double: buffer too small");
  return std::string(buf, ptr);
}

double parse_number(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw InputError("not a number: '" + text + "'");
  return v;
}

std::ptrdiff_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

Table loss_table(const AlgorithmTrace& trace) {
  const std::size_t n = trace.losses.size();
  const bool regret = trace.regret.size() == n && n > 0;
  const bool weights = trace.weights.size() == n && n > 0;
  const bool alpha = trace.alpha_error.size() == n && n > 0;
  Table table;
  table.columns = {"t", "loss"};
  if (regret) table.columns.push_back("regret");
  if (weights) {
    for (const auto& label : trace.weight_labels) table.columns.push_back("w_" + label);
  }
  if (alpha) table.columns.push_back("alpha_error");
  table.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row{static_cast<double>(i + 1), trace.losses[i]};
    if (regret) row.push_back(trace.regret[i]);
    if (weights) row.insert(row.end(), trace.weights[i].begin(), trace.weights[i].end());
    if (alpha) row.push_back(trace.alpha_error[i]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table prediction_table(const AlgorithmTrace& trace) {
  Table table;
  if (trace.predictions.empty()) return table;
  table.columns = {"t"};
  const Eigen::Index dim = trace.predictions.front().second.size();
  for (Eigen::Index k = 0; k < dim; ++k) table.columns.push_back("theta_" + std::to_string(k));
  for (const auto& [t, theta] : trace.predictions) {
    std::vector<double> row{static_cast<double>(t)};
    row.insert(row.end(), theta.data(), theta.data() + theta.size());
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string render_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += i == 0 ? std::to_string(static_cast<std::uint64_t>(row[i])) : format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

Table parse_csv(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  Table table;
  if (!std::getline(in, line) || strip(line).empty()) throw InputError(origin + ": missing header");
  table.columns = split(strip(line), ',');
  const bool losses = table.columns.size() >= 2 && table.columns[0] == "t" && table.columns[1] == "loss";
  const bool thetas = table.columns.size() >= 2 && table.columns[0] == "t" && table.columns[1] == "theta_0";
  if (!losses && !thetas) throw InputError(origin + ": header must start with t,loss or t,theta_0");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const auto cells = split(strip(line), ',');
    if (cells.size() != table.columns.size()) {
      throw InputError(origin + ": line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                       " fields, header has " + std::to_string(table.columns.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    try {
      for (const auto& c : cells) row.push_back(parse_number(c));
    } catch (const InputError& e) {
      throw InputError(origin + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!table.rows.empty() && !(row[0] > table.rows.back()[0])) {
      throw InputError(origin + ": line " + std::to_string(line_no) + ": t is not increasing");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table read_csv(const std::filesystem::path& path) { return parse_csv(read_text(path), path.string()); }

std::string render_key_values(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

KeyValues parse_key_values(const std::string& text, const std::string& origin) {
  KeyValues out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw InputError(origin + ": line " + std::to_string(line_no) + ": expected key = value");
    out.emplace_back(strip(s.substr(0, eq)), strip(s.substr(eq + 1)));
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::string trace_file_name(const std::string& experiment, std::uint64_t seed, const std::string& algorithm) {
  return experiment + "_seed" + std::to_string(seed) + "_" + algorithm + ".csv";
}

std::string prediction_file_name(const std::string& experiment, std::uint64_t seed,
                                 const std::string& algorithm) {
  return experiment + "_seed" + std::to_string(seed) + "_" + algorithm + "_predictions.csv";
}

std::optional<TraceName> parse_trace_name(const std::string& filename) {
  const std::string suffix = ".csv";
  if (filename.size() <= suffix.size() || filename.compare(filename.size() - suffix.size(), suffix.size(), suffix) != 0) {
    return std::nullopt;
  }
  const std::string stem = filename.substr(0, filename.size() - suffix.size());
  const auto mark = stem.find("_seed");
  if (mark == std::string::npos || mark == 0) return std::nullopt;
  const auto digits_end = stem.find('_', mark + 5);
  if (digits_end == std::string::npos || digits_end == mark + 5 || digits_end + 1 >= stem.size()) return std::nullopt;
  TraceName name;
  name.experiment = stem.substr(0, mark);
  const std::string digits = stem.substr(mark + 5, digits_end - mark - 5);
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), name.seed);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  name.algorithm = stem.substr(digits_end + 1);
  return name;
}

std::vector<std::pair<std::string, double>> trace_block(const Table& table, const std::vector<Interval>& intervals) {
  const auto loss = table.column("loss");
  if (loss < 0) throw InputError("trace has no loss column");
  const std::size_t n = table.rows.size();
  std::vector<std::pair<std::string, double>> out;
  out.emplace_back("rounds", static_cast<double>(n));
  double total = 0.0;
  for (const auto& row : table.rows) total += row[static_cast<std::size_t>(loss)];
  out.emplace_back("mean_loss", n ? total / static_cast<double>(n) : std::nan(""));
  for (const auto& iv : intervals) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& row : table.rows) {
      if (iv.contains(static_cast<std::size_t>(row[0]))) {
        sum += row[static_cast<std::size_t>(loss)];
        ++count;
      }
    }
    if (count == 0) continue;
    out.emplace_back("loss_" + std::to_string(iv.start) + "_" + std::to_string(iv.end),
                     sum / static_cast<double>(count));
  }
  if (const auto regret = table.column("regret"); regret >= 0 && n > 0) {
    const double final_regret = table.rows.back()[static_cast<std::size_t>(regret)];
    out.emplace_back("final_regret", final_regret);
    out.emplace_back("regret_over_sqrt_t", final_regret / std::sqrt(table.rows.back()[0]));
  }
  if (const auto alpha = table.column("alpha_error"); alpha >= 0 && n > 0) {
    out.emplace_back("final_alpha_error", table.rows.back()[static_cast<std::size_t>(alpha)]);
  }
  return out;
}

}  // namespace dynoc::app
