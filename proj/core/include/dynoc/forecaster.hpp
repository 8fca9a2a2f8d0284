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

#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynoc/dynamics.hpp"
#include "dynoc/geometry.hpp"
#include "dynoc/losses.hpp"

namespace dynoc {

/// η_t = η₀/√t.
struct StepSchedule {
  double eta0 = 1.0;
  double at(std::size_t t) const { return eta0 / std::sqrt(static_cast<double>(t)); }
};

/// One round of the game: the revealed observation and the smooth loss f_t.
struct LossRound {
  Vector observation;
  std::shared_ptr<const SmoothLoss> loss;
};

/// One online learner: current prediction θ̂_t, round counter and the
/// fixed ingredients of its update. Single writer.
struct ForecasterState {
  Vector theta_hat;
  std::size_t t = 1;
  StepSchedule schedule;
  MirrorGeometry geometry;
  DynamicsPtr dynamics;
  Regularizer regularizer = Regularizer::none();
};

/// Builds a state, checking θ̂₁ ∈ Θ and η₀ > 0. A null dynamics pointer
/// means the identity map.
ForecasterState make_forecaster(MirrorGeometry geometry, Vector theta1, double eta0,
                                DynamicsPtr dynamics = nullptr,
                                Regularizer regularizer = Regularizer::none());

/// ℓ_t(θ) = f_t(θ) + r(θ).
double round_loss(const ForecasterState& state, const LossRound& round, const Vector& theta);

struct StepOutcome {
  Vector theta_tilde;  // the prox output before the dynamics are applied
  double loss = 0.0;   // ℓ_t(θ̂_t), incurred before the update
};

/// Dynamic mirror descent: prox step on ∇f_t(θ̂_t) and r, then θ̂_{t+1} = Φ_t(θ̃_{t+1}).
/// history must hold x_1..x_t when the dynamics are data-dependent.
StepOutcome dmd_step(ForecasterState& state, const LossRound& round, History history = {});

/// Composite objective mirror descent: the prox step alone (Φ = identity).
double comid_step(ForecasterState& state, const LossRound& round);

/// Mirror descent on the full subgradient ∇f_t + ∂r with no separate prox
/// for r. Dynamics are not applied.
double md_step(ForecasterState& state, const LossRound& round);

enum class UpdateRule { kDmd, kComid, kMd };

/// Inputs of the per-round tracking inequality
///   ℓ_t(θ̂_t) − ℓ_t(θ_t) ≤ (1/η)[D(θ_t‖θ̂_t) − D(θ_{t+1}‖θ̂_{t+1})]
///                         + Δ/η + (2M/η)‖θ_{t+1} − Φ_t(θ_t)‖ + (η/2σ)G².
struct TrackingRoundTerms {
  double eta = 1.0;
  double forecaster_loss = 0.0;
  double comparator_loss = 0.0;
  Vector theta_hat;
  Vector theta_hat_next;
  Vector comparator;
  Vector comparator_next;
  Vector comparator_mapped;  // Φ_t(θ_t)
  double lipschitz_loss = 0.0;    // G
  double lipschitz_mirror = 0.0;  // M
  double distortion = 0.0;        // Δ_Φ
};

/// Right side minus left side of the inequality; ≥ 0 up to rounding.
double tracking_residual(const MirrorGeometry& geom, const TrackingRoundTerms& terms);

/// Runs DMD from `initial` against a comparator and returns the residual of
/// every round. G and M are running maxima of ‖∇ℓ_t(θ̂_t)‖ and ‖∇ψ‖ over
/// the iterates and comparator points seen so far.
std::vector<double> audit_tracking_bound(ForecasterState initial, std::span<const LossRound> rounds,
                                 const ComparatorSequence& comparator, double distortion = 0.0);

struct ForecastTrace {
  std::vector<double> losses;
  /// (t, θ̂_t) every `stride` rounds; empty when stride = 0.
  std::vector<std::pair<std::size_t, Vector>> predictions;
  std::optional<RegretLedger> ledger;
  std::optional<double> comparator_variation;
  bool complete = true;
  std::string error;
};

/// Collects x_1..x_T from the rounds.
std::vector<Vector> observations_of(std::span<const LossRound> rounds);

/// Loop over the rounds with the chosen update rule. A failing step stops the
/// run and marks the trace incomplete. When a comparator is given the trace
/// carries a regret ledger and V_Φ of the comparator.
ForecastTrace run_forecaster(ForecasterState state, std::span<const LossRound> rounds,
                             UpdateRule rule = UpdateRule::kDmd,
                             const ComparatorSequence* comparator = nullptr,
                             std::size_t stride = 0);

}  // namespace dynoc
