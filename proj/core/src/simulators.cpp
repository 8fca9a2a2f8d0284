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

#include "dynoc/simulators.hpp"

#include <algorithm>
#include <cmath>

#include "dynoc/losses.hpp"
#include "dynoc/rng.hpp"

namespace dynoc {
namespace {

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, CounterRng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

}  // namespace

Matrix random_orthonormal(Eigen::Index rows, Eigen::Index cols, CounterRng& rng) {
  if (cols < 1 || rows < cols) throw InputError("random_orthonormal: need 1 <= cols <= rows");
  const Matrix g = gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

void validate_intervals(const std::vector<Interval>& intervals, std::size_t horizon) {
  std::size_t last_end = 0;
  for (const auto& iv : intervals) {
    if (iv.start < 1 || iv.end < iv.start || iv.end > horizon) {
      throw ConfigError("interval [" + std::to_string(iv.start) + "," + std::to_string(iv.end) +
                        "] is not inside [1," + std::to_string(horizon) + "]");
    }
    if (iv.start <= last_end) throw ConfigError("intervals must be ordered and disjoint");
    last_end = iv.end;
  }
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

TextureWorld TextureWorld::desk(std::uint64_t seed, Eigen::Index p, Eigen::Index q,
                                double missing_rate, std::vector<Interval> anomalies,
                                double state_noise, double obs_noise, double emission_gain) {
  if (p < 1 || q < p) throw ConfigError("texture: need 1 <= p <= q");
  if (!(missing_rate >= 0.0 && missing_rate <= 1.0)) throw ConfigError("texture: missing rate must be in [0,1]");
  if (!(state_noise >= 0.0) || !(obs_noise >= 0.0)) throw ConfigError("texture: noise gains must be >= 0");
  if (!(emission_gain > 0.0)) throw ConfigError("texture: emission gain must be > 0");
  CounterRng rng(seed, "texture/world");
  TextureWorld w;
  w.p = p;
  w.q = q;
  w.a = 0.98 * random_orthonormal(p, p, rng);
  w.a_alt = w.a.transpose();
  w.c = std::make_shared<const Matrix>(emission_gain * random_orthonormal(q, p, rng));
  w.c_alt = w.c;
  Vector c0(q);
  for (Eigen::Index k = 0; k < q; ++k) c0[k] = rng.uniform();
  w.c0 = std::make_shared<const Vector>(std::move(c0));
  w.b = Vector::Constant(p, state_noise);
  w.b_alt = w.b;
  w.d = Vector::Constant(q, obs_noise);
  w.d_alt = w.d;
  w.missing_rate = missing_rate;
  w.anomalies = std::move(anomalies);
  return w;
}

TextureStream texture_stream(const TextureWorld& world, std::size_t horizon, std::uint64_t seed) {
  if (horizon < 1) throw ConfigError("texture_stream: T must be >= 1");
  validate_intervals(world.anomalies, horizon);
  CounterRng rng(seed, "texture/stream");
  const auto anomalous = [&](std::size_t t) {
    return std::any_of(world.anomalies.begin(), world.anomalies.end(),
                       [t](const Interval& iv) { return iv.contains(t); });
  };
  const double rho = spectral_norm(world.a);
  const double spread = rho < 1.0 ? 1.0 / std::sqrt(1.0 - rho * rho) : 1.0;

  TextureStream s;
  s.observations.reserve(horizon);
  s.masks.reserve(horizon);
  s.states.reserve(horizon);
  Vector theta(world.p);
  for (Eigen::Index k = 0; k < world.p; ++k) theta[k] = spread * world.b[k] * rng.normal();
  for (std::size_t t = 1; t <= horizon; ++t) {
    const bool alt = anomalous(t);
    if (t > 1) {
      const Matrix& a = alt ? world.a_alt : world.a;
      const Vector& b = alt ? world.b_alt : world.b;
      Vector u(world.p);
      for (Eigen::Index k = 0; k < world.p; ++k) u[k] = rng.normal();
      theta = a * theta + b.cwiseProduct(u);
    }
    const Matrix& c = alt ? *world.c_alt : *world.c;
    const Vector& d = alt ? world.d_alt : world.d;
    Vector v(world.q);
    for (Eigen::Index k = 0; k < world.q; ++k) v[k] = rng.normal();
    Vector mask(world.q);
    for (Eigen::Index k = 0; k < world.q; ++k) mask[k] = rng.uniform() < world.missing_rate ? 0.0 : 1.0;
    s.observations.push_back(*world.c0 + c * theta + d.cwiseProduct(v));
    s.masks.push_back(std::move(mask));
    s.states.push_back(theta);
  }
  return s;
}

std::vector<LossRound> texture_rounds(const TextureWorld& world, const TextureStream& stream) {
  std::vector<LossRound> rounds;
  rounds.reserve(stream.observations.size());
  for (std::size_t i = 0; i < stream.observations.size(); ++i) {
    rounds.push_back({stream.observations[i],
                      std::make_shared<MaskedEmissionLoss>(world.c, world.c0, stream.observations[i],
                                                           stream.masks[i])});
  }
  return rounds;
}

CSVideoWorld CSVideoWorld::desk(std::uint64_t seed, std::size_t horizon, std::size_t switch_at,
                                Eigen::Index rows, Eigen::Index cols, Eigen::Index measurements,
                                double noise_var) {
  if (horizon < 1 || rows < 1 || cols < 1) throw ConfigError("cs video: empty frame or horizon");
  if (measurements < 1 || measurements >= rows * cols) {
    throw ConfigError("cs video: need 1 <= s < rows*cols");
  }
  if (!(noise_var > 0.0)) throw ConfigError("cs video: noise variance must be > 0");
  if (switch_at < 1) throw ConfigError("cs video: switch round must be >= 1");

  CSVideoWorld w;
  w.rows = rows;
  w.cols = cols;
  w.measurements = measurements;
  w.noise_var = noise_var;
  w.schedule = {{1, 0, 1}, {switch_at, 1, 0}};

  // Content moving by (dx, dy) means the window moves by (−dx) columns and
  // dy rows down the canvas.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pos(horizon);
  pos[0] = {0, 0};
  for (std::size_t t = 1; t < horizon; ++t) {
    const auto [dx, dy] = w.motion_at(t);
    pos[t] = {pos[t - 1].first + dy, pos[t - 1].second - dx};
  }
  Eigen::Index r_min = 0, r_max = 0, c_min = 0, c_max = 0;
  for (const auto& [r, c] : pos) {
    r_min = std::min(r_min, r);
    r_max = std::max(r_max, r);
    c_min = std::min(c_min, c);
    c_max = std::max(c_max, c);
  }
  for (auto& [r, c] : pos) {
    r -= r_min;
    c -= c_min;
  }
  w.window = std::move(pos);

  const Eigen::Index height = r_max - r_min + rows;
  const Eigen::Index width = c_max - c_min + cols;
  CounterRng rng(seed, "csvideo/canvas");
  w.canvas = Matrix::Zero(height, width);
  const auto blobs = std::max<Eigen::Index>(1, height * width / 50);
  for (Eigen::Index n = 0; n < blobs; ++n) {
    const double cr = rng.uniform(0.0, static_cast<double>(height));
    const double cc = rng.uniform(0.0, static_cast<double>(width));
    const double sigma = rng.uniform(1.0, 2.5);
    const double amp = rng.uniform(0.5, 1.0);
    const auto reach = static_cast<Eigen::Index>(std::ceil(4.0 * sigma));
    const auto r0 = std::max<Eigen::Index>(0, static_cast<Eigen::Index>(cr) - reach);
    const auto r1 = std::min<Eigen::Index>(height - 1, static_cast<Eigen::Index>(cr) + reach);
    const auto c0 = std::max<Eigen::Index>(0, static_cast<Eigen::Index>(cc) - reach);
    const auto c1 = std::min<Eigen::Index>(width - 1, static_cast<Eigen::Index>(cc) + reach);
    for (Eigen::Index r = r0; r <= r1; ++r) {
      for (Eigen::Index c = c0; c <= c1; ++c) {
        const double dr = static_cast<double>(r) + 0.5 - cr;
        const double dc = static_cast<double>(c) + 0.5 - cc;
        w.canvas(r, c) += amp * std::exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma));
      }
    }
  }
  w.canvas = w.canvas.cwiseMin(1.0);
  return w;
}

std::pair<int, int> CSVideoWorld::motion_at(std::size_t t) const {
  std::pair<int, int> m{0, 0};
  for (const auto& seg : schedule) {
    if (seg.from <= t) m = {seg.dx, seg.dy};
  }
  return m;
}

Vector CSVideoWorld::frame(std::size_t t) const {
  if (t < 1 || t > window.size()) throw InputError("cs video: frame index outside the horizon");
  const auto [r0, c0] = window[t - 1];
  Vector out(rows * cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) out[r * cols + c] = canvas(r0 + r, c0 + c);
  }
  return out;
}

CSStream cs_stream(const CSVideoWorld& world, std::size_t horizon, std::uint64_t seed) {
  if (horizon < 1 || horizon > world.window.size()) {
    throw ConfigError("cs_stream: T must be in [1, world horizon]");
  }
  CounterRng rng(seed, "csvideo/stream");
  const double noise_sd = std::sqrt(world.noise_var);
  CSStream s;
  for (std::size_t t = 1; t <= horizon; ++t) {
    auto a = std::make_shared<const Matrix>(gaussian_matrix(world.measurements, world.rows * world.cols, rng));
    Vector frame = world.frame(t);
    Vector x = (*a) * frame;
    for (Eigen::Index k = 0; k < x.size(); ++k) x[k] += noise_sd * rng.normal();
    s.sensing.push_back(std::move(a));
    s.measurements.push_back(std::move(x));
    s.frames.push_back(std::move(frame));
  }
  return s;
}

std::vector<LossRound> cs_rounds(const CSVideoWorld& world, const CSStream& stream) {
  std::vector<LossRound> rounds;
  rounds.reserve(stream.measurements.size());
  for (std::size_t i = 0; i < stream.measurements.size(); ++i) {
    rounds.push_back({stream.measurements[i],
                      std::make_shared<CompressiveLoss>(stream.sensing[i], stream.measurements[i],
                                                        world.noise_var)});
  }
  return rounds;
}

HawkesWorld HawkesWorld::desk(std::uint64_t seed, Eigen::Index d, double memory, double base_rate,
                              double spectral) {
  if (d < 1) throw ConfigError("hawkes: need d >= 1");
  if (!(memory >= 0.0 && memory < 1.0)) throw ConfigError("hawkes: memory must be in [0,1)");
  if (!(base_rate > 0.0)) throw ConfigError("hawkes: base rate must be > 0");
  if (!(spectral >= 0.0)) throw ConfigError("hawkes: spectral norm bound must be >= 0");
  CounterRng rng(seed, "hawkes/world");
  HawkesWorld w;
  w.d = d;
  w.memory = memory;
  w.base_rate = Vector::Constant(d, base_rate);
  Vector u(d);
  for (Eigen::Index k = 0; k < d; ++k) u[k] = rng.uniform(0.1, 1.1);
  // uuᵀ has spectral norm ‖u‖².
  w.excitation = (spectral / u.squaredNorm()) * (u * u.transpose());
  return w;
}

HawkesStream hawkes_stream(const HawkesWorld& world, std::size_t horizon, std::uint64_t seed) {
  if (horizon < 1) throw ConfigError("hawkes_stream: T must be >= 1");
  CounterRng rng(seed, "hawkes/stream");
  HawkesStream s;
  s.counts.reserve(horizon);
  s.rates.reserve(horizon);
  Vector mu = world.base_rate.cwiseMax(world.floor).cwiseMin(world.ceiling);
  for (std::size_t t = 1; t <= horizon; ++t) {
    Vector x(world.d);
    for (Eigen::Index k = 0; k < world.d; ++k) x[k] = static_cast<double>(rng.poisson(mu[k]));
    s.rates.push_back(mu);
    mu = (world.memory * mu + world.excitation * x + (1.0 - world.memory) * world.base_rate)
             .cwiseMax(world.floor)
             .cwiseMin(world.ceiling);
    s.counts.push_back(std::move(x));
  }
  return s;
}

}  // namespace dynoc
