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

#include "dynoc/types.hpp"

namespace dynoc {

enum class MirrorKind {
  kSquaredEuclidean,  // ψ(θ) = ½‖θ‖²
  kPoisson,           // ψ(θ) = Σ_k exp(θ_k), the Poisson log-partition
};

/// A mirror map ψ over a box domain, with its gradient, inverse gradient
/// and strong-convexity constant σ with respect to ℓ2.
///
/// For the Poisson map σ = exp(min_k lo_k), so the lower bounds must be
/// finite. Immutable after construction.
class MirrorGeometry {
 public:
  static MirrorGeometry squared_euclidean(Box domain);
  static MirrorGeometry poisson(Box domain);

  MirrorKind kind() const { return kind_; }
  const Box& domain() const { return domain_; }
  Eigen::Index dim() const { return domain_.dim(); }
  double sigma() const { return sigma_; }

  double psi(const Vector& theta) const;
  Vector grad_psi(const Vector& theta) const;
  /// (∇ψ)⁻¹ without box clipping; for the Poisson map nonpositive dual
  /// entries map to -inf.
  Vector grad_psi_inverse(const Vector& dual) const;

 private:
  MirrorGeometry(MirrorKind kind, Box domain, double sigma)
      : kind_(kind), domain_(std::move(domain)), sigma_(sigma) {}

  MirrorKind kind_;
  Box domain_;
  double sigma_;
};

/// D(a‖b) = ψ(a) − ψ(b) − ⟨∇ψ(b), a − b⟩. Throws InputError when a or b is
/// outside the domain.
double bregman(const MirrorGeometry& geom, const Vector& a, const Vector& b);

/// D(a‖b) − D(c‖b) − D(a‖c) − ⟨∇ψ(b) − ∇ψ(c), c − a⟩, which is zero
/// analytically. Exposed for testing.
double law_of_cosines_residual(const MirrorGeometry& geom, const Vector& a, const Vector& b,
                               const Vector& c);

class Regularizer {
 public:
  enum class Kind { kNone, kL1 };

  static Regularizer none() { return Regularizer(Kind::kNone, 0.0); }
  static Regularizer l1(double tau);

  Kind kind() const { return kind_; }
  double tau() const { return tau_; }

  double value(const Vector& theta) const;
  /// Minimal-norm subgradient: sign(θ)·τ, with 0 at θ_k = 0.
  Vector subgradient(const Vector& theta) const;

  bool operator==(const Regularizer&) const = default;

 private:
  Regularizer(Kind kind, double tau) : kind_(kind), tau_(tau) {}

  Kind kind_;
  double tau_;
};

/// The linearized composite problem
///   argmin_{θ ∈ Θ} η⟨g, θ⟩ + η r(θ) + D(θ‖anchor).
struct CompositeObjective {
  Vector gradient;
  Regularizer regularizer = Regularizer::none();
  double eta = 1.0;
};

Vector soft_threshold(const Vector& v, double threshold);

/// Exact minimizer of the composite problem over geom.domain(). Both
/// mirror maps are finite on all of R^d, so the anchor may lie outside the
/// domain.
///
/// Supported pairs: squared-Euclidean with no regularizer or L1, and the
/// Poisson map with no regularizer. Anything else raises ConfigError.
Vector composite_prox(const MirrorGeometry& geom, const Vector& anchor,
                      const CompositeObjective& obj);

}  // namespace dynoc
