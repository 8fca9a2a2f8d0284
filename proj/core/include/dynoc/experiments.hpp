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
#include <utility>
#include <vector>

#include "dynoc/simulators.hpp"

namespace dynoc {

/// Per-round record of one algorithm on one stream.
struct AlgorithmTrace {
  std::string algorithm;
  std::vector<double> losses;
  /// Cumulative regret against the true parameter sequence; empty when
  /// the experiment has no ground truth for this algorithm.
  std::vector<double> regret;
  std::vector<std::string> weight_labels;
  std::vector<std::vector<double>> weights;
  std::vector<double> alpha_error;
  std::vector<std::pair<std::size_t, Vector>> predictions;
  bool complete = true;
  std::string error;
};

struct ExperimentResult {
  std::string experiment;
  std::uint64_t seed = 0;
  std::vector<AlgorithmTrace> traces;
  /// Ordered key/value statistics.
  std::vector<std::pair<std::string, double>> summary;

  const AlgorithmTrace& trace(const std::string& algorithm) const;
  double stat(const std::string& key) const;
};

struct TextureConfig {
  std::size_t horizon = 550;
  Eigen::Index p = 10;
  Eigen::Index q = 100;
  double missing_rate = 0.5;
  std::vector<Interval> anomalies = {{100, 120}, {300, 320}};
  double eta0 = 0.5;
  double state_noise = 0.1;
  double obs_noise = 0.05;
  double emission_gain = 2.0;
  std::size_t stride = 0;
};

/// DMD with Φ = A and plain MD on one texture stream. Summary keys:
/// dmd_anomaly_mean, dmd_flank_mean, dmd_normal_mean, md_normal_mean.
/// Flanking windows are the equal-length windows just before and after
/// each interval, cut to [1, T] and to rounds outside every interval.
ExperimentResult experiment_a(const TextureConfig& config, std::uint64_t seed);

struct CSVideoConfig {
  std::size_t horizon = 400;
  std::size_t switch_at = 220;
  Eigen::Index rows = 16;
  Eigen::Index cols = 16;
  Eigen::Index measurements = 30;
  double noise_var = 0.1;
  double tau_reg = 0.002;
  double eta0 = 1.0;
  std::size_t directions = 9;  // plus one no-motion model; 0 leaves only that one
  std::size_t switches = 1;    // m
  std::optional<double> lambda;  // default m/(T−1)
  std::optional<double> eta_r;   // default from the switch bound
  bool baselines = true;         // individual DMD experts and COMID
  std::size_t stride = 0;
};

/// DFS over directional shift models and a no-motion model. Summary keys:
/// switch_lag (rounds after the switch until the rightward model holds
/// majority weight, or T if never), dfs_total, best_expert_total,
/// best_expert, lambda, eta_r.
ExperimentResult experiment_b(const CSVideoConfig& config, std::uint64_t seed);

struct HawkesConfig {
  std::size_t horizon = 2000;
  Eigen::Index d = 10;
  double memory = 0.5;
  double base_rate = 0.1;
  double spectral = 0.25;
  double eta0 = 0.9;
  double rho0 = 0.005;
  double alpha_max = 5.0;
  std::size_t stride = 0;
};

/// DMD with the true W, MD and joint tracking of W. Summary keys:
/// {dmd,md,joint}_tail_mean over the last 10% of rounds,
/// alpha_error_third{1,2,3} (mean relative error per third), clamped_rounds.
ExperimentResult experiment_c(const HawkesConfig& config, std::uint64_t seed);

struct GridToyConfig {
  std::size_t horizon = 500;
  double a_min = 0.0;
  double a_max = 1.0;
  double gamma = 0.5;
  double true_alpha = 0.3;
  double noise = 0.05;
  double eta0 = 1.0;
  std::size_t budget = 100'000;
};

/// Covering-grid DFS on a planar stream rotating by α radians per round.
/// Summary keys: grid_points, best_alpha, best_weight, true_alpha.
ExperimentResult experiment_custom(const GridToyConfig& config, std::uint64_t seed);

struct ScalingPoint {
  std::size_t horizon = 0;
  double regret = 0.0;        // mean over seeds
  double normalized = 0.0;    // regret / √T
  double bound = 0.0;         // C√T(1 + V_Φ) with V_Φ = 0
  double max_run_excess = 0.0;  // max over seeds of R_T − bound
};

/// Regret of DMD against comparators that follow a rotation exactly, on
/// noisy quadratic losses, averaged over seeds.
std::vector<ScalingPoint> regret_scaling(const std::vector<std::size_t>& horizons,
                                         std::size_t seeds, std::uint64_t base_seed = 1,
                                         Eigen::Index dim = 4, double eta0 = 1.0);

/// Mean of values over the closed 1-based round range [start, end].
double window_mean(const std::vector<double>& values, std::size_t start, std::size_t end);

}  // namespace dynoc
