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

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dynoc/app/runner.hpp"

namespace {

using namespace dynoc;
using namespace dynoc::app;

std::string flag_name(const std::string& key) {
  std::string out = key;
  for (auto& c : out) {
    if (c == '_') c = '-';
  }
  return "--" + out;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kValidation;
  } catch (const InputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << " (required " << e.required() << ", budget " << e.budget()
              << ")\n";
    return kResource;
  } catch (const InternalError& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_atomic(path, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic mirror descent experiments and checks"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run an experiment over a list of seeds and write traces");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "key = value configuration file");
  std::map<std::string, std::optional<std::string>> overrides;
  for (const auto& key : config_keys()) {
    auto& slot = overrides[key];
    run_cmd->add_option_function<std::string>(flag_name(key), [&slot](const std::string& v) { slot = v; },
                                              "overrides '" + key + "'");
  }
  bool print_config = false;
  run_cmd->add_flag("--print-config", print_config, "print the resolved configuration and exit");

  auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suites");
  std::string suite = "all";
  std::uint64_t verify_seed = 1;
  std::string fault = "none";
  std::string verify_out;
  verify_cmd->add_option("--suite", suite, "suite name or all")->capture_default_str();
  verify_cmd->add_option("--seed", verify_seed, "base seed")->capture_default_str();
  verify_cmd->add_option("--fault", fault, "inject a known fault: none or k-update-sign")
      ->check(CLI::IsMember({"none", "k-update-sign"}))
      ->capture_default_str();
  verify_cmd->add_option("--out", verify_out, "write the report here instead of stdout");

  auto* summarize_cmd = app.add_subcommand("summarize", "Aggregate trace files");
  std::vector<std::string> inputs;
  std::vector<std::string> interval_texts;
  std::string summary_out;
  summarize_cmd->add_option("inputs", inputs, "trace files or directories");
  summarize_cmd->add_option("--interval", interval_texts, "round interval start-end, repeatable");
  summarize_cmd->add_option("--out", summary_out, "write the table here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }

  if (*run_cmd) {
    return guarded([&] {
      RunConfig config = config_path.empty() ? RunConfig{} : load(config_path);
      for (const auto& key : config_keys()) {
        if (const auto& v = overrides[key]) set(config, key, *v);
      }
      validate(config);
      if (print_config) {
        std::cout << render(config);
        return int{kOk};
      }
      const RunReport report = run(config);
      for (const auto& f : report.files) std::cout << f.string() << "\n";
      return int{kOk};
    });
  }

  if (*verify_cmd) {
    return guarded([&] {
      const auto results =
          run_invariants(suite, verify_options(verify_seed, fault == "none" ? Fault::kNone : Fault::kKUpdateSign));
      write_or_print(verify_out, render_invariants(results));
      const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
      return int{ok ? kOk : kInvariant};
    });
  }

  return guarded([&] {
    std::vector<Interval> intervals;
    for (const auto& text : interval_texts) {
      const auto parsed = parse_intervals(text);
      intervals.insert(intervals.end(), parsed.begin(), parsed.end());
    }
    std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
    const KeyValues table = summarize(paths, intervals);
    if (table.empty()) {
      write_or_print(summary_out, "# empty: no trace files\n");
    } else {
      write_or_print(summary_out, render_key_values(table));
    }
    return int{kOk};
  });
}
