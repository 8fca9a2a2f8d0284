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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dynoc/geometry.hpp"
#include "dynoc/types.hpp"

namespace dynoc {

/// Observations x_1..x_t; element t−1 holds x_t.
using History = std::span<const Vector>;

/// A time-indexed map Φ_t on parameter space. Outputs are clipped to the
/// model's domain box. Data-dependent models read x_t from the history.
/// Immutable and safe to share across threads.
class DynamicsModel {
 public:
  explicit DynamicsModel(Box domain) : domain_(std::move(domain)) {}
  virtual ~DynamicsModel() = default;

  /// Φ_t(θ) clipped to the domain; t is 1-based.
  Vector apply(std::size_t t, const Vector& theta, History history = {}) const;

  virtual bool data_dependent() const { return false; }
  virtual std::string name() const = 0;

  const Box& domain() const { return domain_; }
  Eigen::Index dim() const { return domain_.dim(); }

 protected:
  virtual Vector map(std::size_t t, const Vector& theta, History history) const = 0;

 private:
  Box domain_;
};

using DynamicsPtr = std::shared_ptr<const DynamicsModel>;

class IdentityDynamics final : public DynamicsModel {
 public:
  using DynamicsModel::DynamicsModel;
  std::string name() const override { return "identity"; }

 protected:
  Vector map(std::size_t, const Vector& theta, History) const override { return theta; }
};

/// Φ(θ) = Aθ.
class LinearDynamics final : public DynamicsModel {
 public:
  LinearDynamics(Matrix a, Box domain);
  std::string name() const override { return "linear"; }
  const Matrix& matrix() const { return a_; }

 protected:
  Vector map(std::size_t, const Vector& theta, History) const override;

 private:
  Matrix a_;
};

/// Translates a row-major rows×cols frame by a displacement (dx, dy) in
/// pixels, dx to the right and dy upward, using bilinear interpolation for
/// fractional displacements. Pixels shifted out are dropped and vacated
/// pixels are zero-filled, so the map is linear with operator norm ≤ 1.
class PixelShiftDynamics final : public DynamicsModel {
 public:
  PixelShiftDynamics(Eigen::Index rows, Eigen::Index cols, double dx, double dy, Box domain);

  /// Unit displacement at angle radians counter-clockwise from "right".
  static std::shared_ptr<PixelShiftDynamics> at_angle(Eigen::Index rows, Eigen::Index cols,
                                                      double angle, Box domain);

  std::string name() const override;
  double dx() const { return dx_; }
  double dy() const { return dy_; }

 protected:
  Vector map(std::size_t, const Vector& theta, History) const override;

 private:
  Eigen::Index rows_;
  Eigen::Index cols_;
  double dx_;
  double dy_;
};

/// Self-exciting rate recursion in log-rate coordinates:
///   θ' = log(τ·e^θ + W·x_t + (1 − τ)·μ̄).
class HawkesDynamics final : public DynamicsModel {
 public:
  HawkesDynamics(double memory, Matrix excitation, Vector base_rate, Box domain);

  bool data_dependent() const override { return true; }
  std::string name() const override { return "hawkes"; }

  double memory() const { return memory_; }
  const Matrix& excitation() const { return excitation_; }
  const Vector& base_rate() const { return base_rate_; }

 protected:
  Vector map(std::size_t t, const Vector& theta, History history) const override;

 private:
  double memory_;
  Matrix excitation_;
  Vector base_rate_;
};

/// D(Φ_t(a)‖Φ_t(b)) − D(a‖b) for one pair.
double distortion_at(const DynamicsModel& model, const MirrorGeometry& geom, std::size_t t,
                     const Vector& a, const Vector& b, History history = {});

/// Largest distortion over `samples` random pairs drawn uniformly from the
/// geometry's domain (infinite bounds truncated to ±10). Contractive models
/// return values ≤ 0 up to rounding.
double distortion_diagnostic(const DynamicsModel& model, const MirrorGeometry& geom, std::size_t t,
                             std::size_t samples, std::uint64_t seed = 0, History history = {});

using ComparatorSequence = std::vector<Vector>;

/// Σ_{t=1}^{T−1} ‖θ_{t+1} − Φ_t(θ_t)‖.
double variation(const DynamicsModel& model, const ComparatorSequence& comparator,
                 History history = {}, Norm norm = Norm::L2);

/// Exact minimum over at most m switches of the summed deviations from a
/// family of models, by dynamic programming over (t, segment, model).
/// Raises ResourceError when T·N·(m+1) exceeds state_budget.
double switched_variation(std::span<const DynamicsPtr> family, const ComparatorSequence& comparator,
                          std::size_t switches, History history = {}, Norm norm = Norm::L2,
                          std::size_t state_budget = 10'000'000);

/// Cumulative forecaster and comparator losses, accumulated left to right.
class RegretLedger {
 public:
  struct Round {
    std::size_t t;
    double forecaster_loss;
    double comparator_loss;
  };

  /// Throws InputError unless t is strictly greater than the last round.
  void record(std::size_t t, double forecaster_loss, double comparator_loss);

  double cumulative_forecaster_loss() const { return forecaster_total_; }
  double cumulative_comparator_loss() const { return comparator_total_; }
  double regret() const { return forecaster_total_ - comparator_total_; }
  const std::vector<Round>& rounds() const { return rounds_; }

 private:
  std::vector<Round> rounds_;
  double forecaster_total_ = 0.0;
  double comparator_total_ = 0.0;
};

}  // namespace dynoc
