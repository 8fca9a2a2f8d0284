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

#include "dynoc/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dynoc {

bool all_finite(const Vector& v) { return v.allFinite(); }

double norm(const Vector& v, Norm kind) {
  return kind == Norm::L1 ? v.lpNorm<1>() : v.norm();
}

Box::Box(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) throw InputError("box bounds differ in dimension");
  if (lower_.size() < 1) throw InputError("box dimension must be >= 1");
  for (Eigen::Index k = 0; k < lower_.size(); ++k) {
    if (std::isnan(lower_[k]) || std::isnan(upper_[k]) || !(lower_[k] <= upper_[k])) {
      throw InputError("box bounds must satisfy lower <= upper");
    }
  }
}

Box Box::unbounded(Eigen::Index dim) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return Box(Vector::Constant(dim, -inf), Vector::Constant(dim, inf));
}

Box Box::uniform(Eigen::Index dim, double lower, double upper) {
  return Box(Vector::Constant(dim, lower), Vector::Constant(dim, upper));
}

bool Box::bounded() const { return lower_.allFinite() && upper_.allFinite(); }

bool Box::contains(const Vector& v) const {
  if (v.size() != dim() || !v.allFinite()) return false;
  return (v.array() >= lower_.array()).all() && (v.array() <= upper_.array()).all();
}

Vector Box::clip(const Vector& v) const {
  return v.cwiseMax(lower_).cwiseMin(upper_);
}

Box Box::truncated(double radius) const {
  Vector lo = lower_;
  Vector hi = upper_;
  for (Eigen::Index k = 0; k < lo.size(); ++k) {
    if (std::isinf(lo[k])) lo[k] = std::min(-radius, hi[k]);
    if (std::isinf(hi[k])) hi[k] = std::max(radius, lo[k]);
  }
  return Box(std::move(lo), std::move(hi));
}

bool Box::operator==(const Box& other) const {
  return dim() == other.dim() && lower_ == other.lower_ && upper_ == other.upper_;
}

void require_vector(const Vector& v, Eigen::Index dim, const char* what) {
  if (v.size() != dim) {
    throw InputError(std::string(what) + ": expected dimension " + std::to_string(dim) +
                     ", got " + std::to_string(v.size()));
  }
  if (!v.allFinite()) throw InputError(std::string(what) + ": non-finite entry");
}

}  // namespace dynoc
