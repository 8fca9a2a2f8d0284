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

#include "dynoc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dynoc/rng.hpp"

namespace dynoc {
namespace {

double snap_to_integer(double v) {
  const double r = std::round(v);
  return std::abs(v - r) < 1e-9 ? r : v;
}

Vector sample_in(const Box& box, CounterRng& rng) {
  Vector v(box.dim());
  for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = rng.uniform(box.lower()[k], box.upper()[k]);
  return v;
}

}  // namespace

Vector DynamicsModel::apply(std::size_t t, const Vector& theta, History history) const {
  if (t < 1) throw InputError("dynamics: time index starts at 1");
  require_vector(theta, dim(), "dynamics input");
  if (data_dependent() && history.size() < t) {
    throw InputError(name() + " dynamics at t=" + std::to_string(t) + " needs " +
                     std::to_string(t) + " observations, got " + std::to_string(history.size()));
  }
  Vector out = domain_.clip(map(t, theta, history));
  if (!out.allFinite()) throw InputError(name() + " dynamics produced a non-finite value");
  return out;
}

LinearDynamics::LinearDynamics(Matrix a, Box domain) : DynamicsModel(std::move(domain)), a_(std::move(a)) {
  if (a_.rows() != dim() || a_.cols() != dim()) throw InputError("LinearDynamics: matrix must be d×d");
}

Vector LinearDynamics::map(std::size_t, const Vector& theta, History) const { return a_ * theta; }

PixelShiftDynamics::PixelShiftDynamics(Eigen::Index rows, Eigen::Index cols, double dx, double dy,
                                       Box domain)
    : DynamicsModel(std::move(domain)),
      rows_(rows),
      cols_(cols),
      dx_(snap_to_integer(dx)),
      dy_(snap_to_integer(dy)) {
  if (rows_ < 1 || cols_ < 1 || rows_ * cols_ != dim()) {
    throw InputError("PixelShiftDynamics: frame shape does not match the domain dimension");
  }
}

std::shared_ptr<PixelShiftDynamics> PixelShiftDynamics::at_angle(Eigen::Index rows, Eigen::Index cols,
                                                                 double angle, Box domain) {
  return std::make_shared<PixelShiftDynamics>(rows, cols, std::cos(angle), std::sin(angle),
                                              std::move(domain));
}

std::string PixelShiftDynamics::name() const {
  std::ostringstream os;
  os << "shift(" << dx_ << "," << dy_ << ")";
  return os.str();
}

Vector PixelShiftDynamics::map(std::size_t, const Vector& theta, History) const {
  // Output pixel (r, c) reads the input at (r + dy, c − dx); row 0 is the top.
  Vector out = Vector::Zero(theta.size());
  const auto pixel = [&](Eigen::Index r, Eigen::Index c) -> double {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) return 0.0;
    return theta[r * cols_ + c];
  };
  const double r_floor = std::floor(dy_);
  const double c_floor = std::floor(-dx_);
  const double fr = dy_ - r_floor;
  const double fc = -dx_ - c_floor;
  const auto dr = static_cast<Eigen::Index>(r_floor);
  const auto dc = static_cast<Eigen::Index>(c_floor);
  for (Eigen::Index r = 0; r < rows_; ++r) {
    for (Eigen::Index c = 0; c < cols_; ++c) {
      const Eigen::Index sr = r + dr;
      const Eigen::Index sc = c + dc;
      double v = (1.0 - fr) * (1.0 - fc) * pixel(sr, sc);
      if (fc > 0.0) v += (1.0 - fr) * fc * pixel(sr, sc + 1);
      if (fr > 0.0) v += fr * (1.0 - fc) * pixel(sr + 1, sc);
      if (fr > 0.0 && fc > 0.0) v += fr * fc * pixel(sr + 1, sc + 1);
      out[r * cols_ + c] = v;
    }
  }
  return out;
}

HawkesDynamics::HawkesDynamics(double memory, Matrix excitation, Vector base_rate, Box domain)
    : DynamicsModel(std::move(domain)),
      memory_(memory),
      excitation_(std::move(excitation)),
      base_rate_(std::move(base_rate)) {
  if (!(memory_ >= 0.0 && memory_ < 1.0)) throw InputError("HawkesDynamics: memory must be in [0,1)");
  if (excitation_.rows() != dim() || excitation_.cols() != dim() || base_rate_.size() != dim()) {
    throw InputError("HawkesDynamics: parameter dimensions disagree");
  }
  if (!this->domain().lower().allFinite()) {
    throw InputError("HawkesDynamics: log-rate domain needs finite lower bounds");
  }
}

Vector HawkesDynamics::map(std::size_t t, const Vector& theta, History history) const {
  const Vector& x = history[t - 1];
  require_vector(x, dim(), "HawkesDynamics observation");
  const Vector rate = memory_ * theta.array().exp().matrix() + excitation_ * x +
                      (1.0 - memory_) * base_rate_;
  Vector out(rate.size());
  for (Eigen::Index k = 0; k < rate.size(); ++k) {
    out[k] = rate[k] > 0.0 ? std::log(rate[k]) : -std::numeric_limits<double>::infinity();
  }
  return out;
}

double distortion_at(const DynamicsModel& model, const MirrorGeometry& geom, std::size_t t,
                     const Vector& a, const Vector& b, History history) {
  const Vector fa = model.apply(t, a, history);
  const Vector fb = model.apply(t, b, history);
  return bregman(geom, fa, fb) - bregman(geom, a, b);
}

double distortion_diagnostic(const DynamicsModel& model, const MirrorGeometry& geom, std::size_t t,
                             std::size_t samples, std::uint64_t seed, History history) {
  if (samples < 1) throw InputError("distortion_diagnostic: samples must be >= 1");
  CounterRng rng(seed, "dynamics/distortion");
  const Box box = geom.domain().truncated(10.0);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector a = sample_in(box, rng);
    const Vector b = sample_in(box, rng);
    worst = std::max(worst, distortion_at(model, geom, t, a, b, history));
  }
  return worst;
}

double variation(const DynamicsModel& model, const ComparatorSequence& comparator, History history,
                 Norm norm_kind) {
  if (comparator.size() < 2) throw InputError("variation: comparator needs at least two points");
  double total = 0.0;
  for (std::size_t t = 1; t < comparator.size(); ++t) {
    total += norm(comparator[t] - model.apply(t, comparator[t - 1], history), norm_kind);
  }
  return total;
}

double switched_variation(std::span<const DynamicsPtr> family, const ComparatorSequence& comparator,
                          std::size_t switches, History history, Norm norm_kind,
                          std::size_t state_budget) {
  const std::size_t n_models = family.size();
  const std::size_t horizon = comparator.size();
  if (n_models < 1) throw InputError("switched_variation: empty model family");
  if (horizon < 2) throw InputError("switched_variation: comparator needs at least two points");
  if (switches > horizon - 2) throw InputError("switched_variation: need m <= T - 2");
  const std::size_t states = horizon * n_models * (switches + 1);
  if (states > state_budget) {
    throw ResourceError("switched_variation: exact search exceeds the state budget", states,
                        state_budget);
  }

  // cost[i][s] = deviation of step s+1 -> s+2 from model i.
  const std::size_t steps = horizon - 1;
  std::vector<std::vector<double>> cost(n_models, std::vector<double>(steps));
  for (std::size_t i = 0; i < n_models; ++i) {
    for (std::size_t s = 0; s < steps; ++s) {
      cost[i][s] =
          norm(comparator[s + 1] - family[i]->apply(s + 1, comparator[s], history), norm_kind);
    }
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t segments = switches + 1;
  // best[k][i]: minimal cost so far using k+1 segments with the last one on model i.
  std::vector<std::vector<double>> best(segments, std::vector<double>(n_models, inf));
  for (std::size_t i = 0; i < n_models; ++i) best[0][i] = cost[i][0];
  for (std::size_t s = 1; s < steps; ++s) {
    std::vector<double> prev_min(segments, inf);
    for (std::size_t k = 0; k < segments; ++k) {
      prev_min[k] = *std::min_element(best[k].begin(), best[k].end());
    }
    for (std::size_t k = segments; k-- > 0;) {
      for (std::size_t i = 0; i < n_models; ++i) {
        const double stay = best[k][i];
        const double open = k > 0 ? prev_min[k - 1] : inf;
        best[k][i] = cost[i][s] + std::min(stay, open);
      }
    }
  }
  double answer = inf;
  for (const auto& row : best) answer = std::min(answer, *std::min_element(row.begin(), row.end()));
  return answer;
}

void RegretLedger::record(std::size_t t, double forecaster_loss, double comparator_loss) {
  if (!rounds_.empty() && t <= rounds_.back().t) {
    throw InputError("RegretLedger: round index must be strictly increasing");
  }
  rounds_.push_back({t, forecaster_loss, comparator_loss});
  forecaster_total_ += forecaster_loss;
  comparator_total_ += comparator_loss;
}

}  // namespace dynoc
