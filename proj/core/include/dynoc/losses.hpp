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

#include <memory>
#include <vector>

#include "dynoc/types.hpp"

namespace dynoc {

/// The smooth data-fit part f_t of a round's loss. Implementations are
/// immutable and pure.
class SmoothLoss {
 public:
  virtual ~SmoothLoss() = default;
  virtual double value(const Vector& theta) const = 0;
  virtual Vector gradient(const Vector& theta) const = 0;
};

/// ½·weight·‖θ − target‖².
class QuadraticLoss final : public SmoothLoss {
 public:
  explicit QuadraticLoss(Vector target, double weight = 1.0);
  double value(const Vector& theta) const override;
  Vector gradient(const Vector& theta) const override;

 private:
  Vector target_;
  double weight_;
};

/// Poisson negative log-likelihood up to a constant: ⟨1, e^θ⟩ − ⟨x, θ⟩.
class PoissonLoss final : public SmoothLoss {
 public:
  explicit PoissonLoss(Vector counts);
  double value(const Vector& theta) const override;
  Vector gradient(const Vector& theta) const override;

 private:
  Vector counts_;
};

/// ‖P(Cθ + C₀ − x)‖² where P keeps the observed entries (mask = 1).
class MaskedEmissionLoss final : public SmoothLoss {
 public:
  MaskedEmissionLoss(std::shared_ptr<const Matrix> emission,
                     std::shared_ptr<const Vector> offset, Vector observation, Vector mask);
  double value(const Vector& theta) const override;
  Vector gradient(const Vector& theta) const override;

 private:
  Vector masked_residual(const Vector& theta) const;

  std::shared_ptr<const Matrix> emission_;
  std::shared_ptr<const Vector> offset_;
  Vector observation_;
  Vector mask_;
};

/// (1/(2σ²d))·‖x − Aθ‖² for one frame of compressive measurements.
class CompressiveLoss final : public SmoothLoss {
 public:
  CompressiveLoss(std::shared_ptr<const Matrix> sensing, Vector measurements, double noise_var);
  double value(const Vector& theta) const override;
  Vector gradient(const Vector& theta) const override;

 private:
  std::shared_ptr<const Matrix> sensing_;
  Vector measurements_;
  double scale_;
};

/// Largest per-coordinate deviation between loss.gradient(point) and central
/// differences with step h, relative to max(1, |g_k|). Diagnostic only.
double subgradient_check(const SmoothLoss& loss, const Vector& point, double h = 1e-5);

}  // namespace dynoc
