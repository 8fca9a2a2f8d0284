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

#include "dynoc/losses.hpp"

#include <algorithm>
#include <cmath>

namespace dynoc {

QuadraticLoss::QuadraticLoss(Vector target, double weight)
    : target_(std::move(target)), weight_(weight) {
  if (!target_.allFinite()) throw InputError("QuadraticLoss: non-finite target");
  if (!(weight_ > 0.0)) throw InputError("QuadraticLoss: weight must be > 0");
}

double QuadraticLoss::value(const Vector& theta) const {
  return 0.5 * weight_ * (theta - target_).squaredNorm();
}

Vector QuadraticLoss::gradient(const Vector& theta) const { return weight_ * (theta - target_); }

PoissonLoss::PoissonLoss(Vector counts) : counts_(std::move(counts)) {
  if (!counts_.allFinite() || (counts_.array() < 0.0).any()) {
    throw InputError("PoissonLoss: counts must be finite and nonnegative");
  }
}

double PoissonLoss::value(const Vector& theta) const {
  return theta.array().exp().sum() - counts_.dot(theta);
}

Vector PoissonLoss::gradient(const Vector& theta) const {
  return theta.array().exp().matrix() - counts_;
}

MaskedEmissionLoss::MaskedEmissionLoss(std::shared_ptr<const Matrix> emission,
                                       std::shared_ptr<const Vector> offset, Vector observation,
                                       Vector mask)
    : emission_(std::move(emission)),
      offset_(std::move(offset)),
      observation_(std::move(observation)),
      mask_(std::move(mask)) {
  if (!emission_ || !offset_) throw InputError("MaskedEmissionLoss: null emission or offset");
  const auto q = emission_->rows();
  if (offset_->size() != q || observation_.size() != q || mask_.size() != q) {
    throw InputError("MaskedEmissionLoss: observation dimensions disagree");
  }
}

Vector MaskedEmissionLoss::masked_residual(const Vector& theta) const {
  return (((*emission_) * theta + *offset_ - observation_).array() * mask_.array()).matrix();
}

double MaskedEmissionLoss::value(const Vector& theta) const {
  return masked_residual(theta).squaredNorm();
}

Vector MaskedEmissionLoss::gradient(const Vector& theta) const {
  // The mask is 0/1, so PᵀP = P.
  return 2.0 * emission_->transpose() * masked_residual(theta);
}

CompressiveLoss::CompressiveLoss(std::shared_ptr<const Matrix> sensing, Vector measurements,
                                 double noise_var)
    : sensing_(std::move(sensing)), measurements_(std::move(measurements)) {
  if (!sensing_ || sensing_->rows() != measurements_.size()) {
    throw InputError("CompressiveLoss: sensing matrix and measurements disagree");
  }
  if (!(noise_var > 0.0)) throw InputError("CompressiveLoss: noise variance must be > 0");
  scale_ = 1.0 / (2.0 * noise_var * static_cast<double>(sensing_->cols()));
}

double CompressiveLoss::value(const Vector& theta) const {
  return scale_ * (measurements_ - (*sensing_) * theta).squaredNorm();
}

Vector CompressiveLoss::gradient(const Vector& theta) const {
  return 2.0 * scale_ * sensing_->transpose() * ((*sensing_) * theta - measurements_);
}

double subgradient_check(const SmoothLoss& loss, const Vector& point, double h) {
  const Vector g = loss.gradient(point);
  Vector probe = point;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < point.size(); ++k) {
    probe[k] = point[k] + h;
    const double up = loss.value(probe);
    probe[k] = point[k] - h;
    const double down = loss.value(probe);
    probe[k] = point[k];
    const double fd = (up - down) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g[k]) / std::max(1.0, std::abs(g[k])));
  }
  return worst;
}

}  // namespace dynoc
