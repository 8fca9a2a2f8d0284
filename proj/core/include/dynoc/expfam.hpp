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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynoc/dynamics.hpp"
#include "dynoc/forecaster.hpp"
#include "dynoc/geometry.hpp"
#include "dynoc/losses.hpp"

namespace dynoc {

/// Exponential family p_θ(x) = exp{⟨θ, φ(x)⟩ − Z(θ)} with φ(x) = x, in
/// primal (θ) and dual (μ = ∇Z(θ)) coordinates.
///
/// Poisson: Z(θ) = ⟨1, e^θ⟩, μ = e^θ, dual box [floor, ceiling].
/// Gaussian (unit variance): Z(θ) = ½‖θ‖², μ = θ.
class ExponentialFamily {
 public:
  enum class Kind { kPoisson, kGaussian };

  static ExponentialFamily poisson(Eigen::Index dim, double floor = 1e-6, double ceiling = 5.0);
  static ExponentialFamily gaussian(Eigen::Index dim, double bound = 1e6);

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return primal_.dim(); }
  const Box& primal_box() const { return primal_; }
  const Box& dual_box() const { return dual_; }

  Vector statistic(const Vector& x) const { return x; }
  double log_partition(const Vector& theta) const;
  /// ∇Z.
  Vector to_dual(const Vector& theta) const;
  /// ∇Z*, unclamped.
  Vector to_primal(const Vector& mu) const;
  /// Clips μ to the dual box; sets *clamped when any entry moved.
  Vector clamp_dual(const Vector& mu, bool* clamped = nullptr) const;

  /// ℓ(θ) = Z(θ) − ⟨φ(x), θ⟩.
  double loss(const Vector& theta, const Vector& x) const;
  /// ℓ̃(μ) = ℓ(∇Z*(μ)).
  double dual_loss(const Vector& mu, const Vector& x) const;
  Vector dual_loss_gradient(const Vector& mu, const Vector& x) const;

  /// Smallest eigenvalue of ∇²Z(θ).
  double min_curvature(const Vector& theta) const;

  /// Mirror geometry ψ = Z over the primal box.
  MirrorGeometry geometry() const;
  std::shared_ptr<const SmoothLoss> make_loss(const Vector& x) const;

 private:
  ExponentialFamily(Kind kind, Box primal, Box dual)
      : kind_(kind), primal_(std::move(primal)), dual_(std::move(dual)) {}

  Kind kind_;
  Box primal_;
  Box dual_;
};

/// (A_t, B_t, c_t) of Φ_t(θ, α) = ∇Z*(A_t∇Z(θ) + B_tα + c_t).
struct AdditiveTerms {
  Matrix a;
  Matrix b;
  Vector c;
};

/// Source of the additive terms at round t. Data-dependent schedules read
/// x_t from the history.
class AdditiveSchedule {
 public:
  virtual ~AdditiveSchedule() = default;
  virtual AdditiveTerms at(std::size_t t, History history) const = 0;
  virtual Eigen::Index state_dim() const = 0;
  virtual Eigen::Index param_dim() const = 0;
  virtual bool data_dependent() const { return false; }
};

class ConstantAdditive final : public AdditiveSchedule {
 public:
  explicit ConstantAdditive(AdditiveTerms terms);
  AdditiveTerms at(std::size_t, History) const override { return terms_; }
  Eigen::Index state_dim() const override { return terms_.a.rows(); }
  Eigen::Index param_dim() const override { return terms_.b.cols(); }

 private:
  AdditiveTerms terms_;
};

/// μ_{t+1} = τμ_t + W x_t + (1 − τ)μ̄ written additively: A = τI,
/// B_t = x_tᵀ ⊗ I (so B_t·vec(W) = W x_t, column-major vec), c = (1 − τ)μ̄.
class HawkesAdditive final : public AdditiveSchedule {
 public:
  HawkesAdditive(double memory, Vector base_rate);
  AdditiveTerms at(std::size_t t, History history) const override;
  Eigen::Index state_dim() const override { return base_rate_.size(); }
  Eigen::Index param_dim() const override { return base_rate_.size() * base_rate_.size(); }
  bool data_dependent() const override { return true; }

 private:
  double memory_;
  Vector base_rate_;
};

/// Column-major vec(W) and its inverse.
Vector vectorize(const Matrix& w);
Matrix unvectorize(const Vector& alpha, Eigen::Index rows);

/// ∇Z*(clamp(A∇Z(θ) + Bα + c)) clipped to the primal box.
Vector additive_apply(const ExponentialFamily& fam, const AdditiveTerms& terms, const Vector& theta,
                      const Vector& alpha, bool* clamped = nullptr);

/// Φ_t(·, α) for a fixed α, usable wherever a DynamicsModel is expected.
class AdditiveDynamicsModel final : public DynamicsModel {
 public:
  AdditiveDynamicsModel(ExponentialFamily family, std::shared_ptr<const AdditiveSchedule> schedule,
                        Vector alpha);
  bool data_dependent() const override { return schedule_->data_dependent(); }
  std::string name() const override { return "additive"; }

 protected:
  Vector map(std::size_t t, const Vector& theta, History history) const override;

 private:
  ExponentialFamily family_;
  std::shared_ptr<const AdditiveSchedule> schedule_;
  Vector alpha_;
};

/// K_{t+1} = (1 − η_t)A_t K_t + B_t.
Matrix k_update(const Matrix& k, const Matrix& a, const Matrix& b, double eta);

using KUpdateFn = std::function<Matrix(const Matrix&, const Matrix&, const Matrix&, double)>;

/// μ̂_{α,t} = μ̂_{β,t} + K_t(α − β).
Vector sensitivity_transport(const Vector& mu_beta, const Matrix& k, const Vector& alpha,
                             const Vector& beta);

/// Joint prediction of θ and the dynamics parameter α.
struct JointState {
  Vector theta_hat;
  Vector mu_hat;
  Vector alpha_hat;
  Matrix k;
  std::size_t t = 1;
  StepSchedule eta;
  StepSchedule rho;
};

/// K₁ = 0, μ̂₁ = ∇Z(θ̂₁). ρ₀ = 0 freezes α.
JointState make_joint_state(const ExponentialFamily& fam, Vector theta1, Vector alpha1,
                            double eta0, double rho0);

struct JointStepOutcome {
  double loss = 0.0;     // ℓ_t(θ̂_t)
  bool clamped = false;  // a dual clamp activated this round
};

/// One round of joint tracking:
///   ∇g = K_tᵀ∇ℓ̃_t(μ̂_t), α̂' = clip_𝒜(α̂ − ρ_t∇g), μ' = μ̂ + K_t(α̂' − α̂),
///   μ̃ = (1 − η_t)μ' + η_tφ(x_t), θ̃ = ∇Z*(μ̃), θ̂' = Φ_t(θ̃, α̂'),
///   K' = (1 − η_t)A_tK_t + B_t.
/// history must hold x_1..x_t; its last element is the round's observation.
/// alpha_box is ignored when α is empty.
JointStepOutcome joint_step(JointState& state, const ExponentialFamily& fam,
                           const AdditiveSchedule& schedule, const Box& alpha_box,
                           History history, const KUpdateFn& update = k_update);

struct JointTrace {
  std::vector<double> losses;
  std::vector<bool> clamped;
  /// ‖α̂_t − α*‖/‖α*‖ per round, when a true parameter is given.
  std::vector<double> alpha_error;
  std::vector<std::pair<std::size_t, Vector>> predictions;
  std::optional<RegretLedger> ledger;
  Vector final_alpha;
  bool complete = true;
  std::string error;
};

JointTrace run_joint(JointState state, const ExponentialFamily& fam,
                    const AdditiveSchedule& schedule, const Box& alpha_box,
                    std::span<const Vector> observations, const Vector* true_alpha = nullptr,
                    const ComparatorSequence* comparator = nullptr, std::size_t stride = 0);

}  // namespace dynoc
