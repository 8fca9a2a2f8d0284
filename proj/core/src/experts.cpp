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

#include "dynoc/experts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dynoc {

DfsHyperparameters dfs_hyperparameters(std::size_t horizon, std::size_t experts,
                                        std::size_t switches) {
  if (horizon < 2) throw InputError("dfs_hyperparameters: need T >= 2");
  if (experts < 1) throw InputError("dfs_hyperparameters: need N >= 1");
  if (switches > horizon - 2) throw InputError("dfs_hyperparameters: need m <= T - 2");
  const double t = static_cast<double>(horizon);
  const double m = static_cast<double>(switches);
  DfsHyperparameters h;
  h.lambda = m / (t - 1.0);
  h.eta_r = std::sqrt(8.0 * ((m + 1.0) * std::log(static_cast<double>(experts)) +
                             m * std::log(t) + 1.0) / t);
  return h;
}

ExpertPool::ExpertPool(std::vector<ForecasterState> experts, double lambda, double eta_r)
    : experts_(std::move(experts)), lambda_(lambda), eta_r_(eta_r) {
  if (experts_.empty()) throw InputError("ExpertPool: need at least one expert");
  if (!(lambda_ >= 0.0 && lambda_ < 1.0)) throw ConfigError("ExpertPool: lambda must be in [0,1)");
  if (!(eta_r_ >= 0.0) || !std::isfinite(eta_r_)) throw ConfigError("ExpertPool: eta_r must be >= 0");
  const auto& first = experts_.front();
  for (const auto& e : experts_) {
    if (e.geometry.dim() != first.geometry.dim() || e.t != first.t) {
      throw InputError("ExpertPool: experts must share dimension and round counter");
    }
  }
  const double n = static_cast<double>(experts_.size());
  weights_.assign(experts_.size(), 1.0 / n);
  log_weights_.assign(experts_.size(), -std::log(n));
  if (experts_.size() == 1) {
    weights_[0] = 1.0;
    log_weights_[0] = 0.0;
  }
}

Vector ExpertPool::prediction() const {
  Vector out = weights_[0] * experts_[0].theta_hat;
  for (std::size_t i = 1; i < experts_.size(); ++i) out += weights_[i] * experts_[i].theta_hat;
  return out;
}

void ExpertPool::fixed_share_update(std::span<const double> losses) {
  const std::size_t n = experts_.size();
  if (losses.size() != n) throw InputError("fixed_share_update: one loss per expert required");
  for (double l : losses) {
    if (!std::isfinite(l)) throw InputError("fixed_share_update: non-finite expert loss");
  }
  if (n == 1) return;

  std::vector<double> lw(n);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    lw[i] = log_weights_[i] - eta_r_ * losses[i];
    top = std::max(top, lw[i]);
  }
  if (!std::isfinite(top)) throw InternalError("fixed_share_update: all log weights are -inf");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += std::exp(lw[i] - top);
  const double log_total = top + std::log(total);

  const double floor = lambda_ / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double reweighted = std::exp(lw[i] - top) / total;
    if (lambda_ == 0.0) {
      weights_[i] = reweighted;
      log_weights_[i] = lw[i] - log_total;
    } else {
      weights_[i] = floor + (1.0 - lambda_) * reweighted;
      log_weights_[i] = std::log(weights_[i]);
    }
  }
}

ExpertPool::StepOutcome ExpertPool::step(const LossRound& round, History history) {
  if (!round.loss) throw InputError("ExpertPool::step: loss round has no loss evaluator");
  StepOutcome out;
  out.loss = round_loss(experts_.front(), round, prediction());
  out.expert_losses.reserve(experts_.size());
  for (const auto& e : experts_) out.expert_losses.push_back(round_loss(e, round, e.theta_hat));
  fixed_share_update(out.expert_losses);
  for (auto& e : experts_) dmd_step(e, round, history);
  return out;
}

PoolTrace run_dfs(ExpertPool pool, std::span<const LossRound> rounds,
                  const ComparatorSequence* comparator, std::size_t stride) {
  PoolTrace trace;
  trace.expert_cumulative_losses.assign(pool.size(), 0.0);
  if (comparator) {
    if (comparator->size() < rounds.size()) throw InputError("run_dfs: comparator is too short");
    trace.ledger.emplace();
  }
  const auto obs = observations_of(rounds);
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    const std::size_t t = pool.experts().front().t;
    if (stride > 0 && i % stride == 0) trace.predictions.emplace_back(t, pool.prediction());
    trace.weights.push_back(pool.weights());
    try {
      const double comparator_loss =
          comparator ? round_loss(pool.experts().front(), rounds[i], (*comparator)[i]) : 0.0;
      const auto out = pool.step(rounds[i], History(obs.data(), i + 1));
      trace.losses.push_back(out.loss);
      for (std::size_t k = 0; k < pool.size(); ++k) {
        trace.expert_cumulative_losses[k] += out.expert_losses[k];
      }
      if (comparator) trace.ledger->record(t, out.loss, comparator_loss);
    } catch (const std::exception& e) {
      trace.weights.pop_back();
      trace.complete = false;
      trace.error = "round " + std::to_string(t) + ": " + e.what();
      break;
    }
  }
  return trace;
}

CoveringGrid build_grid(double a_min, double a_max, std::size_t n, std::size_t horizon,
                        double gamma, std::size_t budget) {
  if (!(a_max > a_min) || !std::isfinite(a_min) || !std::isfinite(a_max)) {
    throw InputError("build_grid: need finite a_min < a_max");
  }
  if (n < 1 || horizon < 1) throw InputError("build_grid: need n >= 1 and T >= 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InputError("build_grid: gamma must be > 0");

  CoveringGrid g;
  g.a_min = a_min;
  g.a_max = a_max;
  g.n = n;
  g.gamma = gamma;
  const double width = a_max - a_min;
  const double raw = std::ceil(width * static_cast<double>(n) *
                               std::pow(static_cast<double>(horizon), gamma) / 2.0);
  if (!(raw <= static_cast<double>(budget))) {
    throw ResourceError("build_grid: grid exceeds the point budget",
                        raw < 1e18 ? static_cast<std::size_t>(raw) : std::size_t(-1), budget);
  }
  g.k = std::max<std::size_t>(1, static_cast<std::size_t>(raw));
  g.delta = width / (2.0 * static_cast<double>(g.k));

  const double required = std::pow(static_cast<double>(g.k), static_cast<double>(n));
  if (required > static_cast<double>(budget)) {
    throw ResourceError("build_grid: grid exceeds the point budget",
                        required < 1e18 ? static_cast<std::size_t>(required) : std::size_t(-1), budget);
  }
  std::size_t total = 1;
  for (std::size_t a = 0; a < n; ++a) total *= g.k;

  std::vector<double> axis(g.k);
  for (std::size_t j = 0; j < g.k; ++j) {
    axis[j] = a_min + (static_cast<double>(2 * j + 1) * width) / static_cast<double>(2 * g.k);
  }
  g.points.reserve(total);
  std::vector<std::size_t> digit(n, 0);
  for (std::size_t p = 0; p < total; ++p) {
    Vector point(static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a) point[static_cast<Eigen::Index>(a)] = axis[digit[a]];
    g.points.push_back(std::move(point));
    for (std::size_t a = 0; a < n && ++digit[a] == g.k; ++a) digit[a] = 0;
  }
  return g;
}

double covering_distance(const CoveringGrid& grid, const Vector& alpha) {
  require_vector(alpha, static_cast<Eigen::Index>(grid.n), "covering_distance alpha");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : grid.points) best = std::min(best, (p - alpha).lpNorm<1>());
  return best;
}

GridTrace grid_dfs(const CoveringGrid& grid, const DynamicsFactory& factory,
                   const GridExpertSpec& spec, std::span<const LossRound> rounds,
                   const ComparatorSequence* comparator) {
  if (grid.points.empty()) throw InputError("grid_dfs: empty grid");
  if (!factory) throw InputError("grid_dfs: missing dynamics factory");
  GridTrace out;
  out.grid = grid;
  const double n = static_cast<double>(grid.points.size());
  const double horizon = static_cast<double>(rounds.size());
  out.hyper.lambda = 0.0;
  out.hyper.eta_r = (n > 1.0 && horizon > 0.0) ? std::sqrt(2.0 * std::log(n) / horizon) : 0.0;

  std::vector<ForecasterState> experts;
  experts.reserve(grid.points.size());
  for (const auto& alpha : grid.points) {
    experts.push_back(
        make_forecaster(spec.geometry, spec.theta1, spec.eta0, factory(alpha), spec.regularizer));
  }
  out.pool = run_dfs(ExpertPool(std::move(experts), out.hyper.lambda, out.hyper.eta_r), rounds,
                     comparator);
  return out;
}

}  // namespace dynoc
