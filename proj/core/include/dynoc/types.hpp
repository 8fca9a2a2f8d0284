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

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dynoc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Malformed arguments: dimension mismatch, points outside a domain, bad ordering.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A valid-looking request for an unsupported or inconsistent configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The request exceeds a configured computational budget.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::size_t required, std::size_t budget)
      : std::runtime_error(what), required_(required), budget_(budget) {}

  std::size_t required() const { return required_; }
  std::size_t budget() const { return budget_; }

 private:
  std::size_t required_;
  std::size_t budget_;
};

/// Broken internal invariant. Never expected with valid inputs.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

bool all_finite(const Vector& v);

enum class Norm { L2, L1 };

double norm(const Vector& v, Norm kind);

/// Axis-aligned box Π_k [lo_k, hi_k]; infinite bounds are allowed.
class Box {
 public:
  Box() = default;
  Box(Vector lower, Vector upper);

  static Box unbounded(Eigen::Index dim);
  static Box uniform(Eigen::Index dim, double lower, double upper);

  Eigen::Index dim() const { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  bool bounded() const;
  bool contains(const Vector& v) const;
  Vector clip(const Vector& v) const;

  /// Same box with infinite bounds replaced by ±radius, for sampling.
  Box truncated(double radius) const;

  bool operator==(const Box& other) const;

 private:
  Vector lower_;
  Vector upper_;
};

/// Throws InputError unless v has the expected dimension and finite entries.
void require_vector(const Vector& v, Eigen::Index dim, const char* what);

}  // namespace dynoc
