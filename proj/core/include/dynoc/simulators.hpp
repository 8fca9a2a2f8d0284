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
#include <cstdint>
#include <memory>
#include <vector>

#include "dynoc/forecaster.hpp"
#include "dynoc/rng.hpp"
#include "dynoc/types.hpp"

namespace dynoc {

/// Closed, 1-based round interval [start, end].
struct Interval {
  std::size_t start = 1;
  std::size_t end = 1;
  std::size_t length() const { return end - start + 1; }
  bool contains(std::size_t t) const { return t >= start && t <= end; }
  bool operator==(const Interval&) const = default;
};

/// Throws ConfigError unless the intervals are ordered, disjoint and lie in [1, T].
void validate_intervals(const std::vector<Interval>& intervals, std::size_t horizon);

/// Low-dimensional autoregressive texture observed through a random
/// missing-data mask:
///   θ_t = Aθ_{t−1} + B∘u_t,  x_t = C₀ + Cθ_t + D∘v_t,
/// with the primed parameter set used inside the anomaly intervals.
struct TextureWorld {
  Eigen::Index p = 10;
  Eigen::Index q = 100;
  Matrix a;
  Matrix a_alt;
  std::shared_ptr<const Matrix> c;
  std::shared_ptr<const Matrix> c_alt;
  std::shared_ptr<const Vector> c0;
  Vector b;
  Vector b_alt;
  Vector d;
  Vector d_alt;
  double missing_rate = 0.5;
  std::vector<Interval> anomalies;

  /// A = 0.98·(random orthogonal), A′ = Aᵀ, C = gain·(orthonormal columns),
  /// C₀ ~ U[0,1]^q, and uniform noise gains. The primed C, B, D equal the
  /// normal ones.
  static TextureWorld desk(std::uint64_t seed, Eigen::Index p = 10, Eigen::Index q = 100,
                           double missing_rate = 0.5, std::vector<Interval> anomalies = {{100, 120}, {300, 320}},
                           double state_noise = 0.1, double obs_noise = 0.05,
                           double emission_gain = 2.0);
};

struct TextureStream {
  std::vector<Vector> observations;
  std::vector<Vector> masks;  // 1 = observed
  std::vector<Vector> states;
};

TextureStream texture_stream(const TextureWorld& world, std::size_t horizon, std::uint64_t seed);

/// ℓ_t(θ) = ‖P_t(Cθ + C₀ − x_t)‖² for every round.
std::vector<LossRound> texture_rounds(const TextureWorld& world, const TextureStream& stream);

/// Frame-to-frame motion from round `from` onward, in whole pixels
/// (dx to the right, dy upward).
struct MotionSegment {
  std::size_t from = 1;
  int dx = 0;
  int dy = 0;
};

/// A rows×cols window sliding over a canvas of Gaussian blobs, observed
/// through s fresh Gaussian measurements per frame.
struct CSVideoWorld {
  Eigen::Index rows = 16;
  Eigen::Index cols = 16;
  Eigen::Index measurements = 30;
  double noise_var = 0.1;
  std::vector<MotionSegment> schedule;
  Matrix canvas;
  /// Window top-left corner on the canvas for every frame.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> window;

  /// Upward motion, then motion to the right from round switch_at on.
  static CSVideoWorld desk(std::uint64_t seed, std::size_t horizon = 400, std::size_t switch_at = 220,
                           Eigen::Index rows = 16, Eigen::Index cols = 16,
                           Eigen::Index measurements = 30, double noise_var = 0.1);

  /// Motion (dx, dy) between frame t and frame t+1.
  std::pair<int, int> motion_at(std::size_t t) const;
  Vector frame(std::size_t t) const;
};

struct CSStream {
  std::vector<std::shared_ptr<const Matrix>> sensing;
  std::vector<Vector> measurements;
  std::vector<Vector> frames;
};

CSStream cs_stream(const CSVideoWorld& world, std::size_t horizon, std::uint64_t seed);

/// f_t(θ) = (1/(2σ²·hw))‖x_t − A_tθ‖² for every round.
std::vector<LossRound> cs_rounds(const CSVideoWorld& world, const CSStream& stream);

/// Discrete-time self-exciting counts:
///   x_t ~ Poisson(μ_t),  μ_{t+1} = τμ_t + W x_t + (1 − τ)μ̄,
/// with rates clipped to [floor, ceiling].
struct HawkesWorld {
  Eigen::Index d = 10;
  double memory = 0.5;
  Vector base_rate;
  Matrix excitation;
  double floor = 1e-6;
  double ceiling = 5.0;

  /// W = uuᵀ with u ~ U[0.1, 1.1]^d, scaled to spectral norm `spectral`.
  static HawkesWorld desk(std::uint64_t seed, Eigen::Index d = 10, double memory = 0.5,
                          double base_rate = 0.1, double spectral = 0.25);
};

struct HawkesStream {
  std::vector<Vector> counts;
  std::vector<Vector> rates;  // rates[t−1] = μ_t
};

HawkesStream hawkes_stream(const HawkesWorld& world, std::size_t horizon, std::uint64_t seed);

double spectral_norm(const Matrix& m);

/// rows×cols matrix with orthonormal columns, Q of the QR factorization
/// of a Gaussian matrix with column signs fixed by diag(R).
Matrix random_orthonormal(Eigen::Index rows, Eigen::Index cols, CounterRng& rng);

}  // namespace dynoc
