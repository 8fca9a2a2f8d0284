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

#include "dynoc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dynoc {
namespace {

void require_in_domain(const MirrorGeometry& geom, const Vector& v, const char* what) {
  if (!geom.domain().contains(v)) {
    throw InputError(std::string(what) + " is outside the geometry domain");
  }
}

}  // namespace

MirrorGeometry MirrorGeometry::squared_euclidean(Box domain) {
  return MirrorGeometry(MirrorKind::kSquaredEuclidean, std::move(domain), 1.0);
}

MirrorGeometry MirrorGeometry::poisson(Box domain) {
  if (!domain.lower().allFinite()) {
    throw ConfigError("Poisson mirror map needs finite lower bounds for strong convexity");
  }
  if ((domain.upper().array() > 700.0).any()) {
    throw ConfigError("Poisson mirror map upper bounds must keep exp() finite");
  }
  const double sigma = std::exp(domain.lower().minCoeff());
  return MirrorGeometry(MirrorKind::kPoisson, std::move(domain), sigma);
}

double MirrorGeometry::psi(const Vector& theta) const {
  if (kind_ == MirrorKind::kSquaredEuclidean) return 0.5 * theta.squaredNorm();
  return theta.array().exp().sum();
}

Vector MirrorGeometry::grad_psi(const Vector& theta) const {
  if (kind_ == MirrorKind::kSquaredEuclidean) return theta;
  return theta.array().exp().matrix();
}

Vector MirrorGeometry::grad_psi_inverse(const Vector& dual) const {
  if (kind_ == MirrorKind::kSquaredEuclidean) return dual;
  Vector out(dual.size());
  for (Eigen::Index k = 0; k < dual.size(); ++k) {
    out[k] = dual[k] > 0.0 ? std::log(dual[k]) : -std::numeric_limits<double>::infinity();
  }
  return out;
}

double bregman(const MirrorGeometry& geom, const Vector& a, const Vector& b) {
  require_in_domain(geom, a, "bregman: first argument");
  require_in_domain(geom, b, "bregman: second argument");
  if (geom.kind() == MirrorKind::kSquaredEuclidean) return 0.5 * (a - b).squaredNorm();
  // e^a − e^b − e^b(a − b) = e^b (expm1(a − b) − (a − b)), nonnegative term by term.
  double total = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    total += std::exp(b[k]) * (std::expm1(diff) - diff);
  }
  return total;
}

double law_of_cosines_residual(const MirrorGeometry& geom, const Vector& a, const Vector& b,
                               const Vector& c) {
  require_in_domain(geom, c, "law_of_cosines_residual: third argument");
  const double lhs = bregman(geom, a, b);
  const double rhs = bregman(geom, c, b) + bregman(geom, a, c) +
                     (geom.grad_psi(b) - geom.grad_psi(c)).dot(c - a);
  return lhs - rhs;
}

Regularizer Regularizer::l1(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw ConfigError("L1 weight must be finite and >= 0");
  return Regularizer(Kind::kL1, tau);
}

double Regularizer::value(const Vector& theta) const {
  return kind_ == Kind::kL1 ? tau_ * theta.lpNorm<1>() : 0.0;
}

Vector Regularizer::subgradient(const Vector& theta) const {
  if (kind_ == Kind::kNone) return Vector::Zero(theta.size());
  Vector g(theta.size());
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    g[k] = theta[k] > 0.0 ? tau_ : (theta[k] < 0.0 ? -tau_ : 0.0);
  }
  return g;
}

Vector soft_threshold(const Vector& v, double threshold) {
  Vector out(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double mag = std::abs(v[k]) - threshold;
    out[k] = mag > 0.0 ? std::copysign(mag, v[k]) : 0.0;
  }
  return out;
}

Vector composite_prox(const MirrorGeometry& geom, const Vector& anchor,
                      const CompositeObjective& obj) {
  require_vector(anchor, geom.dim(), "composite_prox: anchor");
  require_vector(obj.gradient, geom.dim(), "composite_prox: gradient");
  if (!(obj.eta > 0.0) || !std::isfinite(obj.eta)) throw InputError("composite_prox: eta must be > 0");

  const Box& box = geom.domain();
  if (geom.kind() == MirrorKind::kSquaredEuclidean) {
    Vector step = anchor - obj.eta * obj.gradient;
    if (obj.regularizer.kind() == Regularizer::Kind::kL1) {
      step = soft_threshold(step, obj.eta * obj.regularizer.tau());
    }
    return box.clip(step);
  }

  if (obj.regularizer.kind() != Regularizer::Kind::kNone) {
    throw ConfigError("composite_prox: the Poisson mirror map supports no regularizer");
  }
  // Stationarity in dual coordinates: e^θ = e^anchor − ηg, coordinate-wise.
  // Where the right side is nonpositive the 1-D objective is increasing,
  // so the constrained minimizer is the lower bound.
  const Vector dual = anchor.array().exp().matrix() - obj.eta * obj.gradient;
  Vector out(dual.size());
  for (Eigen::Index k = 0; k < dual.size(); ++k) {
    out[k] = dual[k] > 0.0 ? std::clamp(std::log(dual[k]), box.lower()[k], box.upper()[k])
                           : box.lower()[k];
  }
  return out;
}

}  // namespace dynoc
