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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynoc/dynamics.hpp"
#include "dynoc/forecaster.hpp"

namespace dynoc {

/// Share parameter λ and reweighting rate η_r for dynamic fixed share.
struct DfsHyperparameters {
  double lambda = 0.0;
  double eta_r = 0.0;
};

/// λ = m/(T−1), η_r = √(8((m+1)·log N + m·log T + 1)/T).
/// Requires T ≥ 2, N ≥ 1 and m ≤ T−2.
DfsHyperparameters dfs_hyperparameters(std::size_t horizon, std::size_t experts,
                                        std::size_t switches);

/// N forecasters, one per candidate dynamics, combined by fixed-share
/// weights. Weights are kept both linearly and in log space: the log form
/// drives the exponential reweighting, the linear form is authoritative
/// after a share step so the floor λ/N holds exactly.
class ExpertPool {
 public:
  ExpertPool(std::vector<ForecasterState> experts, double lambda, double eta_r);

  std::size_t size() const { return experts_.size(); }
  double lambda() const { return lambda_; }
  double eta_r() const { return eta_r_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& log_weights() const { return log_weights_; }
  const std::vector<ForecasterState>& experts() const { return experts_; }

  /// Σ_i w_i θ̂_i.
  Vector prediction() const;

  /// w̃_i ∝ w_i·exp(−η_r ℓ_i), then w_i = λ/N + (1−λ)·w̃_i.
  void fixed_share_update(std::span<const double> losses);

  struct StepOutcome {
    double loss = 0.0;                 // ℓ_t at the pooled prediction
    std::vector<double> expert_losses;  // ℓ_t(θ̂_{i,t})
  };

  /// One round: incur the pooled loss, update the weights from the expert
  /// losses, then advance every expert by one DMD step.
  StepOutcome step(const LossRound& round, History history = {});

 private:
  std::vector<ForecasterState> experts_;
  double lambda_;
  double eta_r_;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
};

struct PoolTrace {
  std::vector<double> losses;
  /// weights[t−1] holds w_{·,t}, the weights used for round t's prediction.
  std::vector<std::vector<double>> weights;
  std::vector<double> expert_cumulative_losses;
  std::vector<std::pair<std::size_t, Vector>> predictions;
  std::optional<RegretLedger> ledger;
  bool complete = true;
  std::string error;
};

PoolTrace run_dfs(ExpertPool pool, std::span<const LossRound> rounds,
                  const ComparatorSequence* comparator = nullptr, std::size_t stride = 0);

/// Product grid over [a_min, a_max]^n with k points per axis at
/// a_min + ∂, a_min + 3∂, …, where ∂ = (a_max − a_min)/(2k).
struct CoveringGrid {
  double a_min = 0.0;
  double a_max = 1.0;
  std::size_t n = 1;
  double gamma = 0.5;
  std::size_t k = 1;
  double delta = 0.5;
  std::vector<Vector> points;
};

/// k = ⌈(a_max − a_min)·n·T^γ/2⌉. Raises ResourceError when k^n exceeds
/// the point budget.
CoveringGrid build_grid(double a_min, double a_max, std::size_t n, std::size_t horizon,
                        double gamma, std::size_t budget = 100'000);

/// Smallest ℓ1 distance from alpha to a grid point.
double covering_distance(const CoveringGrid& grid, const Vector& alpha);

using DynamicsFactory = std::function<DynamicsPtr(const Vector& alpha)>;

/// Everything a grid run shares across its experts.
struct GridExpertSpec {
  MirrorGeometry geometry;
  Vector theta1;
  double eta0 = 1.0;
  Regularizer regularizer = Regularizer::none();
};

struct GridTrace {
  CoveringGrid grid;
  DfsHyperparameters hyper;
  PoolTrace pool;
};

/// Fixed share with λ = 0 and η_r = √(2·log N/T) over one DMD expert per
/// grid point, N = k^n and T = rounds.size().
GridTrace grid_dfs(const CoveringGrid& grid, const DynamicsFactory& factory,
                   const GridExpertSpec& spec, std::span<const LossRound> rounds,
                   const ComparatorSequence* comparator = nullptr);

}  // namespace dynoc
