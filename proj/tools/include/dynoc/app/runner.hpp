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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dynoc/app/config.hpp"
#include "dynoc/app/trace_io.hpp"
#include "dynoc/invariants.hpp"

namespace dynoc::app {

enum ExitCode : int { kOk = 0, kValidation = 1, kInvariant = 2, kResource = 3 };

ExperimentResult run_experiment(const RunConfig& config, std::uint64_t seed);

/// Intervals the trace blocks of a run report on.
std::vector<Interval> declared_intervals(const RunConfig& config);

struct RunReport {
  std::vector<std::filesystem::path> files;  // traces and summary, in seed order
  std::filesystem::path summary;
  std::filesystem::path timing;
};

/// Runs every seed on `config.workers` threads. Each seed's traces are
/// written atomically as soon as it finishes; the summary follows once all
/// seeds are done. Errors from the lowest failing seed are rethrown.
RunReport run(const RunConfig& config);

/// Fault injected into verify to check that the suites detect it.
enum class Fault { kNone, kKUpdateSign };

InvariantOptions verify_options(std::uint64_t seed, Fault fault);

/// One tab-separated line per invariant: status, suite, name, worst, threshold, detail.
std::string render_invariants(const std::vector<InvariantResult>& results);

/// Groups trace files by experiment and algorithm and reports the mean of
/// every trace_block entry with its seed-level standard deviation. Inputs may
/// be files or directories; directories contribute their *.csv loss traces.
/// An algorithm seen at several horizons gets one group per horizon.
KeyValues summarize(const std::vector<std::filesystem::path>& inputs, const std::vector<Interval>& intervals);

}  // namespace dynoc::app
