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

#include "dynoc/app/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace dynoc::app {
namespace {

namespace fs = std::filesystem;

struct SeedOutput {
  std::vector<fs::path> files;
  std::vector<std::pair<std::string, double>> stats;  // already prefixed by algorithm
  std::vector<std::pair<std::string, double>> summary;
  double seconds = 0.0;
  std::exception_ptr error;
};

SeedOutput run_seed(const RunConfig& config, std::uint64_t seed, const std::vector<Interval>& intervals) {
  SeedOutput out;
  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult result = run_experiment(config, seed);
  const fs::path dir(config.out_dir);
  for (const auto& trace : result.traces) {
    const Table table = loss_table(trace);
    const fs::path path = dir / trace_file_name(result.experiment, seed, trace.algorithm);
    write_atomic(path, render_csv(table));
    out.files.push_back(path);
    for (const auto& [k, v] : trace_block(table, intervals)) out.stats.emplace_back(trace.algorithm + "." + k, v);
    const Table predictions = prediction_table(trace);
    if (!predictions.rows.empty()) {
      const fs::path ppath = dir / prediction_file_name(result.experiment, seed, trace.algorithm);
      write_atomic(ppath, render_csv(predictions));
      out.files.push_back(ppath);
    }
  }
  out.summary = result.summary;
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
};

Moments moments(const std::vector<double>& values) {
  Moments m;
  if (values.empty()) return m;
  for (double v : values) m.mean += v;
  m.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return m;
}

// Keys in first-seen order with the values of every seed.
using Series = std::vector<std::pair<std::string, std::vector<double>>>;

void accumulate(Series& series, const std::vector<std::pair<std::string, double>>& entries) {
  for (const auto& [k, v] : entries) {
    auto it = std::find_if(series.begin(), series.end(), [&](const auto& e) { return e.first == k; });
    if (it == series.end()) {
      series.emplace_back(k, std::vector<double>{v});
    } else {
      it->second.push_back(v);
    }
  }
}

void emit(KeyValues& out, const std::string& prefix, const Series& series) {
  for (const auto& [k, values] : series) {
    const Moments m = moments(values);
    out.emplace_back(prefix + k, format_double(m.mean));
    if (values.size() > 1) out.emplace_back(prefix + k + ".sd", format_double(m.sd));
  }
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& config, std::uint64_t seed) {
  if (config.experiment == "a") return experiment_a(texture_config(config), seed);
  if (config.experiment == "b") return experiment_b(cs_config(config), seed);
  if (config.experiment == "c") return experiment_c(hawkes_config(config), seed);
  if (config.experiment == "custom") return experiment_custom(grid_config(config), seed);
  throw ConfigError("experiment: unknown '" + config.experiment + "'");
}

std::vector<Interval> declared_intervals(const RunConfig& config) {
  if (config.experiment == "a") return texture_config(config).anomalies;
  return {};
}

RunReport run(const RunConfig& config) {
  validate(config);
  const fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("out_dir: cannot create " + config.out_dir + ": " + ec.message());
  const auto intervals = declared_intervals(config);

  const std::size_t n = config.seeds.size();
  std::vector<SeedOutput> outputs(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        outputs[i] = run_seed(config, config.seeds[i], intervals);
      } catch (...) {
        outputs[i].error = std::current_exception();
      }
    }
  };
  const auto started = std::chrono::steady_clock::now();
  std::vector<std::thread> pool;
  const std::size_t threads = std::min(config.workers, n);
  for (std::size_t w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  const double total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  for (const auto& o : outputs) {
    if (o.error) std::rethrow_exception(o.error);
  }

  RunReport report;
  KeyValues summary;
  summary.emplace_back("experiment", config.experiment);
  RunConfig echo = config;
  echo.out_dir = RunConfig{}.out_dir;
  echo.workers = 1;
  for (const auto& [k, v] : parse_key_values(render(echo), "config")) {
    if (k != "experiment" && k != "out_dir" && k != "workers") summary.emplace_back("config." + k, v);
  }
  summary.emplace_back("intervals", format_intervals(intervals));
  Series stats, trace_stats;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string prefix = "seed" + std::to_string(config.seeds[i]) + ".";
    for (const auto& [k, v] : outputs[i].summary) summary.emplace_back(prefix + k, format_double(v));
    for (const auto& [k, v] : outputs[i].stats) summary.emplace_back(prefix + k, format_double(v));
    accumulate(stats, outputs[i].summary);
    accumulate(trace_stats, outputs[i].stats);
    report.files.insert(report.files.end(), outputs[i].files.begin(), outputs[i].files.end());
  }
  emit(summary, "mean.", stats);
  emit(summary, "mean.", trace_stats);

  report.summary = dir / (config.experiment + "_summary.txt");
  write_atomic(report.summary, render_key_values(summary));
  report.files.push_back(report.summary);

  // Wall-clock lives apart from the summary so reruns stay byte-identical.
  KeyValues timing;
  for (std::size_t i = 0; i < n; ++i) {
    timing.emplace_back("seed" + std::to_string(config.seeds[i]) + ".seconds", format_double(outputs[i].seconds));
  }
  timing.emplace_back("total_seconds", format_double(total_seconds));
  timing.emplace_back("workers", std::to_string(threads));
  report.timing = dir / (config.experiment + "_timing.txt");
  write_atomic(report.timing, render_key_values(timing));
  return report;
}

InvariantOptions verify_options(std::uint64_t seed, Fault fault) {
  InvariantOptions options;
  options.seed = seed;
  if (fault == Fault::kKUpdateSign) {
    options.k_update = [](const Matrix& k, const Matrix& a, const Matrix& b, double eta) -> Matrix {
      return (1.0 + eta) * a * k + b;
    };
  }
  return options;
}

std::string render_invariants(const std::vector<InvariantResult>& results) {
  std::string out = "status\tsuite\tname\tworst\tthreshold\tdetail\n";
  for (const auto& r : results) {
    out += std::string(r.passed ? "PASS" : "FAIL") + "\t" + r.suite + "\t" + r.name + "\t" + format_double(r.worst) +
           "\t" + format_double(r.threshold) + "\t" + r.detail + "\n";
  }
  return out;
}

KeyValues summarize(const std::vector<fs::path>& inputs, const std::vector<Interval>& intervals) {
  std::vector<fs::path> files;
  for (const auto& input : inputs) {
    if (fs::is_directory(input)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(input)) {
        const auto name = entry.path().filename().string();
        const auto parsed = parse_trace_name(name);
        if (entry.is_regular_file() && parsed && !parsed->algorithm.ends_with("_predictions")) {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(input)) {
      files.push_back(input);
    } else {
      throw InputError("no such trace file or directory: " + input.string());
    }
  }

  struct Loaded {
    std::string group;
    Table table;
  };
  std::vector<Loaded> loaded;
  std::map<std::string, std::set<std::size_t>> horizons;
  for (const auto& path : files) {
    const auto name = parse_trace_name(path.filename().string());
    std::string group = name ? name->experiment + "." + name->algorithm : path.stem().string();
    Table table = read_csv(path);
    if (table.column("loss") != 1) throw InputError(path.string() + ": not a loss trace");
    horizons[group].insert(table.rows.size());
    loaded.push_back({std::move(group), std::move(table)});
  }

  std::vector<std::string> order;
  std::map<std::string, std::vector<std::string>> schema;
  std::map<std::string, Series> series;
  std::map<std::string, std::size_t> counts;
  for (auto& l : loaded) {
    if (horizons[l.group].size() > 1) l.group += "@T" + std::to_string(l.table.rows.size());
    auto [it, fresh] = schema.emplace(l.group, l.table.columns);
    if (fresh) order.push_back(l.group);
    if (it->second != l.table.columns) throw InputError("schema mismatch within " + l.group);
    accumulate(series[l.group], trace_block(l.table, intervals));
    ++counts[l.group];
  }

  KeyValues out;
  for (const auto& group : order) {
    out.emplace_back(group + ".traces", std::to_string(counts[group]));
    emit(out, group + ".", series[group]);
  }
  return out;
}

}  // namespace dynoc::app
