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

#include "dynoc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dynoc/experts.hpp"
#include "dynoc/expfam.hpp"
#include "dynoc/losses.hpp"
#include "dynoc/rng.hpp"

namespace dynoc {
namespace {

std::vector<double> cumulative_regret(const std::optional<RegretLedger>& ledger) {
  std::vector<double> out;
  if (!ledger) return out;
  out.reserve(ledger->rounds().size());
  double total = 0.0;
  for (const auto& r : ledger->rounds()) {
    total += r.forecaster_loss - r.comparator_loss;
    out.push_back(total);
  }
  return out;
}

AlgorithmTrace from_forecast(std::string name, ForecastTrace&& f) {
  AlgorithmTrace a;
  a.algorithm = std::move(name);
  a.regret = cumulative_regret(f.ledger);
  a.losses = std::move(f.losses);
  a.predictions = std::move(f.predictions);
  a.complete = f.complete;
  a.error = std::move(f.error);
  return a;
}

double mean_over(const std::vector<double>& values, const std::vector<std::size_t>& rounds) {
  if (rounds.empty()) return std::nan("");
  double total = 0.0;
  for (std::size_t t : rounds) total += values.at(t - 1);
  return total / static_cast<double>(rounds.size());
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

void require_complete(const ExperimentResult& r) {
  for (const auto& t : r.traces) {
    if (!t.complete) throw InternalError(r.experiment + "/" + t.algorithm + " failed at " + t.error);
  }
}

Matrix rotation(double angle) {
  Matrix r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

}  // namespace

const AlgorithmTrace& ExperimentResult::trace(const std::string& algorithm) const {
  for (const auto& t : traces) {
    if (t.algorithm == algorithm) return t;
  }
  throw InputError("no trace for algorithm " + algorithm);
}

double ExperimentResult::stat(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  throw InputError("no summary statistic " + key);
}

double window_mean(const std::vector<double>& values, std::size_t start, std::size_t end) {
  if (start < 1 || end < start || end > values.size()) throw InputError("window_mean: bad window");
  double total = 0.0;
  for (std::size_t t = start; t <= end; ++t) total += values[t - 1];
  return total / static_cast<double>(end - start + 1);
}

ExperimentResult experiment_a(const TextureConfig& config, std::uint64_t seed) {
  validate_intervals(config.anomalies, config.horizon);
  if (!(config.eta0 > 0.0)) throw ConfigError("experiment a: eta0 must be > 0");
  const TextureWorld world = TextureWorld::desk(seed, config.p, config.q, config.missing_rate,
                                                config.anomalies, config.state_noise, config.obs_noise,
                                                config.emission_gain);
  const TextureStream stream = texture_stream(world, config.horizon, seed);
  const auto rounds = texture_rounds(world, stream);
  const auto geom = MirrorGeometry::squared_euclidean(Box::unbounded(config.p));
  const Vector theta1 = Vector::Zero(config.p);
  const auto dyn = std::make_shared<LinearDynamics>(world.a, Box::unbounded(config.p));

  ExperimentResult r;
  r.experiment = "a";
  r.seed = seed;
  r.traces.push_back(from_forecast(
      "dmd", run_forecaster(make_forecaster(geom, theta1, config.eta0, dyn), rounds, UpdateRule::kDmd,
                            &stream.states, config.stride)));
  r.traces.push_back(from_forecast(
      "md", run_forecaster(make_forecaster(geom, theta1, config.eta0), rounds, UpdateRule::kMd,
                           &stream.states, config.stride)));
  require_complete(r);

  const auto inside = [&](std::size_t t) {
    return std::any_of(config.anomalies.begin(), config.anomalies.end(),
                       [t](const Interval& iv) { return iv.contains(t); });
  };
  std::vector<std::size_t> anomaly_rounds, flank_rounds, normal_rounds;
  for (std::size_t t = 1; t <= config.horizon; ++t) (inside(t) ? anomaly_rounds : normal_rounds).push_back(t);
  for (const auto& iv : config.anomalies) {
    const std::size_t len = iv.length();
    const std::size_t lo = iv.start > len ? iv.start - len : 1;
    for (std::size_t t = lo; t < iv.start; ++t) {
      if (!inside(t)) flank_rounds.push_back(t);
    }
    for (std::size_t t = iv.end + 1; t <= std::min(config.horizon, iv.end + len); ++t) {
      if (!inside(t)) flank_rounds.push_back(t);
    }
  }
  const auto& dmd = r.trace("dmd").losses;
  const auto& md = r.trace("md").losses;
  r.summary = {{"dmd_anomaly_mean", mean_over(dmd, anomaly_rounds)},
               {"dmd_flank_mean", mean_over(dmd, flank_rounds)},
               {"dmd_normal_mean", mean_over(dmd, normal_rounds)},
               {"md_normal_mean", mean_over(md, normal_rounds)},
               {"dmd_final_regret", r.trace("dmd").regret.back()},
               {"md_final_regret", r.trace("md").regret.back()}};
  return r;
}

ExperimentResult experiment_b(const CSVideoConfig& config, std::uint64_t seed) {
  if (config.switch_at >= config.horizon) throw ConfigError("experiment b: switch must be before T");
  if (!(config.eta0 > 0.0)) throw ConfigError("experiment b: eta0 must be > 0");
  const CSVideoWorld world = CSVideoWorld::desk(seed, config.horizon, config.switch_at, config.rows,
                                                config.cols, config.measurements, config.noise_var);
  const CSStream stream = cs_stream(world, config.horizon, seed);
  const auto rounds = cs_rounds(world, stream);
  const Eigen::Index dim = config.rows * config.cols;
  const Box box = Box::uniform(dim, 0.0, 1.0);
  const auto geom = MirrorGeometry::squared_euclidean(box);
  const auto reg = Regularizer::l1(config.tau_reg);
  const Vector theta1 = Vector::Zero(dim);

  std::vector<DynamicsPtr> family;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < config.directions; ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(config.directions);
    family.push_back(PixelShiftDynamics::at_angle(config.rows, config.cols, angle, box));
    labels.push_back("dir" + fixed(angle * 180.0 / std::numbers::pi, 0));
  }
  family.push_back(std::make_shared<IdentityDynamics>(box));
  labels.push_back("static");

  DfsHyperparameters hyper = dfs_hyperparameters(config.horizon, family.size(), config.switches);
  if (config.lambda) hyper.lambda = *config.lambda;
  if (config.eta_r) hyper.eta_r = *config.eta_r;

  std::vector<ForecasterState> experts;
  for (const auto& phi : family) experts.push_back(make_forecaster(geom, theta1, config.eta0, phi, reg));
  PoolTrace pool = run_dfs(ExpertPool(experts, hyper.lambda, hyper.eta_r), rounds, &stream.frames,
                           config.stride);

  ExperimentResult r;
  r.experiment = "b";
  r.seed = seed;
  AlgorithmTrace dfs;
  dfs.algorithm = "dfs";
  dfs.regret = cumulative_regret(pool.ledger);
  dfs.losses = pool.losses;
  dfs.weights = pool.weights;
  dfs.weight_labels = labels;
  dfs.predictions = std::move(pool.predictions);
  dfs.complete = pool.complete;
  dfs.error = pool.error;
  r.traces.push_back(std::move(dfs));
  if (config.baselines) {
    for (std::size_t i = 0; i < family.size(); ++i) {
      r.traces.push_back(from_forecast("dmd_" + labels[i],
                                       run_forecaster(experts[i], rounds, UpdateRule::kDmd, &stream.frames)));
    }
    r.traces.push_back(from_forecast(
        "comid", run_forecaster(make_forecaster(geom, theta1, config.eta0, nullptr, reg), rounds,
                                UpdateRule::kComid, &stream.frames)));
  }
  require_complete(r);

  double lag = static_cast<double>(config.horizon);
  for (std::size_t t = config.switch_at + 1; config.directions > 0 && t <= config.horizon; ++t) {
    if (pool.weights[t - 1][0] > 0.5) {
      lag = static_cast<double>(t - config.switch_at);
      break;
    }
  }
  const auto best = std::min_element(pool.expert_cumulative_losses.begin(), pool.expert_cumulative_losses.end());
  double dfs_total = 0.0;
  for (double l : pool.losses) dfs_total += l;
  r.summary = {{"switch_lag", lag},
               {"dfs_total", dfs_total},
               {"best_expert_total", *best},
               {"best_expert", static_cast<double>(best - pool.expert_cumulative_losses.begin())},
               {"lambda", hyper.lambda},
               {"eta_r", hyper.eta_r},
               {"dfs_final_regret", r.trace("dfs").regret.back()}};
  return r;
}

ExperimentResult experiment_c(const HawkesConfig& config, std::uint64_t seed) {
  if (config.horizon < 3) throw ConfigError("experiment c: T must be >= 3");
  if (!(config.eta0 > 0.0 && config.eta0 <= 1.0)) throw ConfigError("experiment c: eta0 must be in (0,1]");
  if (!(config.rho0 >= 0.0)) throw ConfigError("experiment c: rho0 must be >= 0");
  if (!(config.alpha_max > 0.0)) throw ConfigError("experiment c: alpha_max must be > 0");
  const HawkesWorld world =
      HawkesWorld::desk(seed, config.d, config.memory, config.base_rate, config.spectral);
  const HawkesStream stream = hawkes_stream(world, config.horizon, seed);
  const auto fam = ExponentialFamily::poisson(config.d, world.floor, world.ceiling);
  const auto geom = fam.geometry();

  std::vector<LossRound> rounds;
  ComparatorSequence truth;
  for (std::size_t i = 0; i < config.horizon; ++i) {
    rounds.push_back({stream.counts[i], fam.make_loss(stream.counts[i])});
    truth.push_back(fam.primal_box().clip(fam.to_primal(stream.rates[i])));
  }
  const Vector theta1 = fam.to_primal(world.base_rate);
  const auto known = std::make_shared<HawkesDynamics>(world.memory, world.excitation, world.base_rate,
                                                      fam.primal_box());

  ExperimentResult r;
  r.experiment = "c";
  r.seed = seed;
  r.traces.push_back(from_forecast(
      "dmd", run_forecaster(make_forecaster(geom, theta1, config.eta0, known), rounds, UpdateRule::kDmd,
                            &truth, config.stride)));
  r.traces.push_back(from_forecast(
      "md", run_forecaster(make_forecaster(geom, theta1, config.eta0), rounds, UpdateRule::kMd, &truth,
                           config.stride)));

  const HawkesAdditive schedule(world.memory, world.base_rate);
  const auto n = config.d * config.d;
  const Box alpha_box = Box::uniform(n, 0.0, config.alpha_max);
  const Vector true_alpha = vectorize(world.excitation);
  JointTrace tracked = run_joint(make_joint_state(fam, theta1, Vector::Zero(n), config.eta0, config.rho0),
                               fam, schedule, alpha_box, stream.counts, &true_alpha, &truth, config.stride);
  AlgorithmTrace joint;
  joint.algorithm = "joint";
  joint.regret = cumulative_regret(tracked.ledger);
  joint.losses = tracked.losses;
  joint.alpha_error = tracked.alpha_error;
  joint.predictions = std::move(tracked.predictions);
  joint.complete = tracked.complete;
  joint.error = tracked.error;
  r.traces.push_back(std::move(joint));
  require_complete(r);

  const std::size_t T = config.horizon;
  const std::size_t tail = T - std::max<std::size_t>(1, (T + 9) / 10) + 1;
  const std::size_t third = T / 3;
  const auto clamped = static_cast<double>(std::count(tracked.clamped.begin(), tracked.clamped.end(), true));
  r.summary = {{"dmd_tail_mean", window_mean(r.trace("dmd").losses, tail, T)},
               {"md_tail_mean", window_mean(r.trace("md").losses, tail, T)},
               {"joint_tail_mean", window_mean(r.trace("joint").losses, tail, T)},
               {"alpha_error_third1", window_mean(tracked.alpha_error, 1, third)},
               {"alpha_error_third2", window_mean(tracked.alpha_error, third + 1, 2 * third)},
               {"alpha_error_third3", window_mean(tracked.alpha_error, 2 * third + 1, T)},
               {"alpha_error_final", tracked.alpha_error.back()},
               {"clamped_rounds", clamped},
               {"dmd_final_regret", r.trace("dmd").regret.back()},
               {"md_final_regret", r.trace("md").regret.back()},
               {"joint_final_regret", r.trace("joint").regret.back()}};
  return r;
}

ExperimentResult experiment_custom(const GridToyConfig& config, std::uint64_t seed) {
  if (config.horizon < 2) throw ConfigError("custom: T must be >= 2");
  if (!(config.noise >= 0.0)) throw ConfigError("custom: noise must be >= 0");
  const CoveringGrid grid = build_grid(config.a_min, config.a_max, 1, config.horizon, config.gamma, config.budget);
  const Box box = Box::uniform(2, -2.0, 2.0);
  CounterRng rng(seed, "custom/stream");

  const Matrix true_rot = rotation(config.true_alpha);
  ComparatorSequence truth;
  std::vector<LossRound> rounds;
  Vector theta(2);
  theta << 1.0, 0.0;
  for (std::size_t t = 1; t <= config.horizon; ++t) {
    if (t > 1) theta = true_rot * theta;
    Vector x = theta;
    for (Eigen::Index k = 0; k < 2; ++k) x[k] += config.noise * rng.normal();
    truth.push_back(theta);
    rounds.push_back({x, std::make_shared<QuadraticLoss>(x)});
  }

  const DynamicsFactory factory = [&box](const Vector& alpha) -> DynamicsPtr {
    return std::make_shared<LinearDynamics>(rotation(alpha[0]), box);
  };
  const GridExpertSpec spec{MirrorGeometry::squared_euclidean(box), Vector::Zero(2), config.eta0,
                            Regularizer::none()};
  GridTrace g = grid_dfs(grid, factory, spec, rounds, &truth);

  ExperimentResult r;
  r.experiment = "custom";
  r.seed = seed;
  AlgorithmTrace a;
  a.algorithm = "grid_dfs";
  a.regret = cumulative_regret(g.pool.ledger);
  a.losses = g.pool.losses;
  a.weights = g.pool.weights;
  for (const auto& p : grid.points) a.weight_labels.push_back("a" + fixed(p[0], 4));
  a.complete = g.pool.complete;
  a.error = g.pool.error;
  r.traces.push_back(std::move(a));
  require_complete(r);

  const auto& last = g.pool.weights.back();
  const auto best = std::max_element(last.begin(), last.end()) - last.begin();
  r.summary = {{"grid_points", static_cast<double>(grid.points.size())},
               {"eta_r", g.hyper.eta_r},
               {"true_alpha", config.true_alpha},
               {"best_alpha", grid.points[static_cast<std::size_t>(best)][0]},
               {"best_weight", last[static_cast<std::size_t>(best)]},
               {"final_regret", r.traces.front().regret.back()}};
  return r;
}

std::vector<ScalingPoint> regret_scaling(const std::vector<std::size_t>& horizons, std::size_t seeds,
                                         std::uint64_t base_seed, Eigen::Index dim, double eta0) {
  if (seeds < 1) throw InputError("regret_scaling: need at least one seed");
  if (dim < 2 || dim % 2 != 0) throw InputError("regret_scaling: dimension must be even");
  const Box box = Box::uniform(dim, -10.0, 10.0);
  const auto geom = MirrorGeometry::squared_euclidean(box);
  std::vector<ScalingPoint> out;
  for (std::size_t horizon : horizons) {
    if (horizon < 2) throw InputError("regret_scaling: T must be >= 2");
    ScalingPoint point;
    point.horizon = horizon;
    point.max_run_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < seeds; ++s) {
      CounterRng rng(base_seed + s, "scaling/stream");
      Matrix rot = Matrix::Zero(dim, dim);
      for (Eigen::Index b = 0; b < dim; b += 2) rot.block(b, b, 2, 2) = rotation(rng.uniform(0.05, 0.3));
      Vector theta(dim);
      for (Eigen::Index k = 0; k < dim; ++k) theta[k] = rng.normal();
      theta *= 5.0 / theta.norm();

      ComparatorSequence truth;
      std::vector<LossRound> rounds;
      for (std::size_t t = 1; t <= horizon; ++t) {
        if (t > 1) theta = rot * theta;
        Vector y = theta;
        for (Eigen::Index k = 0; k < dim; ++k) y[k] += rng.normal();
        truth.push_back(theta);
        rounds.push_back({y, std::make_shared<QuadraticLoss>(y)});
      }

      ForecasterState state = make_forecaster(geom, Vector::Zero(dim), eta0,
                                              std::make_shared<LinearDynamics>(rot, box));
      double d_max = 0.0;
      double g_max = 0.0;
      double eta_sum = 0.0;
      double regret = 0.0;
      for (std::size_t i = 0; i < horizon; ++i) {
        d_max = std::max(d_max, bregman(geom, truth[i], state.theta_hat));
        g_max = std::max(g_max, rounds[i].loss->gradient(state.theta_hat).norm());
        eta_sum += state.schedule.at(state.t);
        const double comparator_loss = round_loss(state, rounds[i], truth[i]);
        regret += dmd_step(state, rounds[i]).loss - comparator_loss;
      }
      const double bound = d_max / state.schedule.at(horizon + 1) + g_max * g_max / (2.0 * geom.sigma()) * eta_sum;
      point.regret += regret / static_cast<double>(seeds);
      point.bound += bound / static_cast<double>(seeds);
      point.max_run_excess = std::max(point.max_run_excess, regret - bound);
    }
    point.normalized = point.regret / std::sqrt(static_cast<double>(horizon));
    out.push_back(point);
  }
  return out;
}

}  // namespace dynoc
