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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "dynoc/experts.hpp"
#include "dynoc/rng.hpp"

namespace dynoc {
namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

LossRound quadratic(const Vector& target) { return {target, std::make_shared<QuadraticLoss>(target)}; }

ExpertPool dummy_pool(std::size_t n, double lambda, double eta_r) {
  const auto geom = MirrorGeometry::squared_euclidean(Box::unbounded(1));
  std::vector<ForecasterState> experts(n, make_forecaster(geom, vec({0.0}), 1.0));
  return ExpertPool(std::move(experts), lambda, eta_r);
}

Matrix rotation(double a) {
  Matrix r(2, 2);
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return r;
}

TEST(FixedShare, EqualLossesKeepUniformWeights) {
  for (double lambda : {0.0, 0.3, 0.9}) {
    ExpertPool pool = dummy_pool(2, lambda, 1.0);
    const std::vector<double> losses{0.7, 0.7};
    pool.fixed_share_update(losses);
    EXPECT_DOUBLE_EQ(pool.weights()[0], 0.5);
    EXPECT_DOUBLE_EQ(pool.weights()[1], 0.5);
  }
}

TEST(FixedShare, TwoExpertHandExample) {
  ExpertPool pool = dummy_pool(2, 0.2, 1.0);
  const std::vector<double> losses{0.0, 1.0};
  pool.fixed_share_update(losses);
  const double reweighted = 1.0 / (1.0 + std::exp(-1.0));
  EXPECT_NEAR(reweighted, 0.73106, 1e-5);
  EXPECT_NEAR(pool.weights()[0], 0.1 + 0.8 * reweighted, 1e-15);
  EXPECT_NEAR(pool.weights()[0], 0.68485, 1e-5);
}

TEST(FixedShare, ZeroShareIsExponentialWeighting) {
  CounterRng rng(1, "test/ewa");
  ExpertPool pool = dummy_pool(4, 0.0, 0.7);
  std::vector<double> cumulative(4, 0.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> losses(4);
    for (int i = 0; i < 4; ++i) {
      losses[i] = rng.uniform(0.0, 3.0);
      cumulative[i] += losses[i];
    }
    pool.fixed_share_update(losses);
  }
  double norm = 0.0;
  for (double c : cumulative) norm += std::exp(-0.7 * (c - cumulative[0]));
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(pool.weights()[i], std::exp(-0.7 * (cumulative[i] - cumulative[0])) / norm, 1e-12);
  }
}

TEST(FixedShare, SimplexAndFloorUnderExtremeLosses) {
  CounterRng rng(2, "test/simplex");
  for (double lambda : {0.0, 0.01, 0.2}) {
    ExpertPool pool = dummy_pool(7, lambda, 2.0);
    for (int t = 0; t < 5000; ++t) {
      std::vector<double> losses(7);
      for (auto& l : losses) l = rng.uniform(0.0, 1e6);
      pool.fixed_share_update(losses);
      const double total = std::accumulate(pool.weights().begin(), pool.weights().end(), 0.0);
      ASSERT_NEAR(total, 1.0, 1e-12);
      for (double w : pool.weights()) {
        ASSERT_TRUE(std::isfinite(w));
        ASSERT_GE(w, lambda / 7.0);
      }
    }
  }
}

TEST(FixedShare, ExponentialWeightingRegretSanity) {
  CounterRng rng(3, "test/ewa-regret");
  const std::size_t n = 5, horizon = 2000;
  ExpertPool pool = dummy_pool(n, 0.0, std::sqrt(2.0 * std::log(static_cast<double>(n)) / horizon));
  std::vector<double> bias(n);
  for (auto& b : bias) b = rng.uniform(0.2, 0.8);
  double mixture = 0.0;
  std::vector<double> cumulative(n, 0.0);
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t t = 0; t < horizon; ++t) {
    std::vector<double> losses(n);
    for (std::size_t i = 0; i < n; ++i) {
      losses[i] = rng.bernoulli(bias[i]) ? 1.0 : 0.0;
      cumulative[i] += losses[i];
      mixture += pool.weights()[i] * losses[i];
      lo = std::min(lo, losses[i]);
      hi = std::max(hi, losses[i]);
    }
    pool.fixed_share_update(losses);
  }
  const double best = *std::min_element(cumulative.begin(), cumulative.end());
  EXPECT_LE(mixture, best + (hi - lo) * std::sqrt(2.0 * horizon * std::log(static_cast<double>(n))));
}

std::size_t recovery_lag(double lambda) {
  ExpertPool pool = dummy_pool(3, lambda, 0.5);
  const std::size_t switch_at = 300;
  for (std::size_t t = 1; t <= 600; ++t) {
    const bool after = t >= switch_at;
    const std::vector<double> losses{after ? 1.0 : 0.0, after ? 0.0 : 1.0, 0.5};
    pool.fixed_share_update(losses);
    if (after && pool.weights()[1] > 0.5) return t + 1 - switch_at;
  }
  return 600;
}

TEST(FixedShare, RecoveryAfterSwitchFasterWithLargerShare) {
  const std::size_t slow = recovery_lag(1e-4);
  const std::size_t mid = recovery_lag(1e-3);
  const std::size_t fast = recovery_lag(1e-2);
  EXPECT_GT(slow, mid);
  EXPECT_GT(mid, fast);
  EXPECT_LT(slow, 600u);
}

TEST(FixedShare, RejectsBadInput) {
  ExpertPool pool = dummy_pool(2, 0.1, 1.0);
  const std::vector<double> wrong_size{1.0};
  const std::vector<double> not_finite{1.0, NAN};
  EXPECT_THROW(pool.fixed_share_update(wrong_size), InputError);
  EXPECT_THROW(pool.fixed_share_update(not_finite), InputError);
  EXPECT_THROW(dummy_pool(2, 1.0, 1.0), ConfigError);
  EXPECT_THROW(dummy_pool(2, 0.1, -1.0), ConfigError);
}

TEST(DfsStep, SingleExpertIsPlainDmd) {
  CounterRng rng(4, "test/single");
  const auto geom = MirrorGeometry::squared_euclidean(Box::uniform(2, -3.0, 3.0));
  const auto phi = std::make_shared<LinearDynamics>(0.9 * rotation(0.3), geom.domain());
  const auto expert = make_forecaster(geom, vec({0.5, 0.5}), 1.0, phi);
  std::vector<LossRound> rounds;
  for (int t = 0; t < 100; ++t) rounds.push_back(quadratic(vec({rng.normal(), rng.normal()})));
  const PoolTrace pool = run_dfs(ExpertPool({expert}, 0.0, 1.0), rounds, nullptr, 1);
  const ForecastTrace single = run_forecaster(expert, rounds, UpdateRule::kDmd, nullptr, 1);
  ASSERT_EQ(pool.losses.size(), single.losses.size());
  for (std::size_t t = 0; t < rounds.size(); ++t) {
    EXPECT_EQ(pool.losses[t], single.losses[t]);
    EXPECT_EQ(pool.predictions[t].second, single.predictions[t].second);
    EXPECT_EQ(pool.weights[t][0], 1.0);
  }
}

TEST(DfsStep, IdenticalExpertsMatchEitherExpert) {
  CounterRng rng(5, "test/twins");
  const auto geom = MirrorGeometry::squared_euclidean(Box::unbounded(2));
  const auto phi = std::make_shared<LinearDynamics>(0.8 * Matrix::Identity(2, 2), geom.domain());
  const auto expert = make_forecaster(geom, vec({1.0, -1.0}), 1.0, phi);
  ExpertPool pool({expert, expert}, 0.05, 1.0);
  ForecasterState single = expert;
  for (int t = 0; t < 100; ++t) {
    const LossRound r = quadratic(vec({rng.normal(), rng.normal()}));
    pool.step(r);
    dmd_step(single, r);
    EXPECT_LT((pool.prediction() - single.theta_hat).lpNorm<Eigen::Infinity>(), 1e-12);
    EXPECT_NEAR(pool.weights()[0], 0.5, 1e-12);
  }
}

TEST(DfsStep, MatchingDynamicsWinsWeight) {
  const auto geom = MirrorGeometry::squared_euclidean(Box::uniform(2, -2.0, 2.0));
  const double angles[3] = {0.1, 0.4, -0.3};
  std::vector<ForecasterState> experts;
  for (double a : angles) {
    experts.push_back(make_forecaster(geom, vec({0.0, 0.0}), 1.0,
                                      std::make_shared<LinearDynamics>(rotation(a), geom.domain())));
  }
  std::vector<LossRound> rounds;
  Vector theta = vec({1.0, 0.0});
  for (int t = 0; t < 50; ++t) {
    rounds.push_back(quadratic(theta));
    theta = rotation(0.4) * theta;
  }
  const PoolTrace trace = run_dfs(ExpertPool(experts, 0.0, 2.0), rounds);
  bool reached = false;
  for (const auto& w : trace.weights) reached = reached || w[1] > 0.9;
  EXPECT_TRUE(reached);
}

TEST(DfsHyperparameters, OneSwitchOverThousandRounds) {
  EXPECT_DOUBLE_EQ(dfs_hyperparameters(1000, 10, 1).lambda, 1.0 / 999.0);
}

TEST(DfsHyperparameters, NoSwitchTwoExperts) {
  const auto h = dfs_hyperparameters(8, 2, 0);
  EXPECT_EQ(h.lambda, 0.0);
  EXPECT_NEAR(h.eta_r, std::sqrt(1.0 + std::log(2.0)), 1e-15);
  EXPECT_NEAR(h.eta_r, 1.3012, 1e-4);
}

TEST(DfsHyperparameters, SingleExpert) {
  const auto h = dfs_hyperparameters(4, 1, 0);
  EXPECT_EQ(h.lambda, 0.0);
  EXPECT_NEAR(h.eta_r, std::sqrt(2.0), 1e-15);
}

TEST(DfsHyperparameters, GeneralFormula) {
  const auto h = dfs_hyperparameters(400, 10, 2);
  EXPECT_DOUBLE_EQ(h.lambda, 2.0 / 399.0);
  EXPECT_NEAR(h.eta_r, std::sqrt(8.0 * (3.0 * std::log(10.0) + 2.0 * std::log(400.0) + 1.0) / 400.0), 1e-15);
}

TEST(DfsHyperparameters, RejectsOutOfRange) {
  EXPECT_THROW(dfs_hyperparameters(1, 2, 0), InputError);
  EXPECT_THROW(dfs_hyperparameters(10, 0, 0), InputError);
  EXPECT_THROW(dfs_hyperparameters(10, 2, 9), InputError);
}

TEST(BuildGrid, SquareRootRateOnUnitInterval) {
  const auto grid = build_grid(0.0, 1.0, 1, 100, 0.5);
  EXPECT_EQ(grid.k, 5u);
  EXPECT_DOUBLE_EQ(grid.delta, 0.1);
  const std::vector<double> expected{0.1, 0.3, 0.5, 0.7, 0.9};
  ASSERT_EQ(grid.points.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(grid.points[i][0], expected[i]);
}

TEST(BuildGrid, MinimalGridForTinyGamma) {
  EXPECT_EQ(build_grid(0.0, 1.0, 1, 1, 1e-9).k, 1u);
  const auto grid = build_grid(-1.0, 1.0, 3, 1, 1e-9);
  EXPECT_EQ(grid.k, 3u);
  EXPECT_EQ(grid.points.size(), 27u);
}

TEST(BuildGrid, CoveringRadiusHolds) {
  CounterRng rng(6, "test/cover");
  const auto grid = build_grid(0.0, 1.0, 1, 100, 0.5);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LE(covering_distance(grid, vec({rng.uniform()})), 0.1 + 1e-12);
  }
  const auto grid2 = build_grid(-1.0, 2.0, 2, 50, 0.4);
  const double radius = std::pow(50.0, -0.4);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LE(covering_distance(grid2, vec({rng.uniform(-1, 2), rng.uniform(-1, 2)})), radius + 1e-12);
  }
}

TEST(BuildGrid, BudgetExceededReportsRequirement) {
  try {
    build_grid(0.0, 1.0, 3, 10000, 0.5, 1000);
    FAIL() << "expected ResourceError";
  } catch (const ResourceError& e) {
    EXPECT_EQ(e.required(), 150u * 150u * 150u);
    EXPECT_EQ(e.budget(), 1000u);
  }
}

TEST(GridDfs, SinglePointIsPlainDmd) {
  const Box box = Box::uniform(2, -2.0, 2.0);
  const auto grid = build_grid(0.2, 0.4, 1, 1, 1e-9);
  ASSERT_EQ(grid.points.size(), 1u);
  const DynamicsFactory factory = [&](const Vector& a) { return std::make_shared<LinearDynamics>(rotation(a[0]), box); };
  std::vector<LossRound> rounds;
  Vector theta = vec({1.0, 0.0});
  CounterRng rng(7, "test/grid-single");
  for (int t = 0; t < 60; ++t) {
    rounds.push_back(quadratic(theta + 0.1 * vec({rng.normal(), rng.normal()})));
    theta = rotation(0.3) * theta;
  }
  const GridExpertSpec spec{MirrorGeometry::squared_euclidean(box), vec({0.0, 0.0}), 1.0};
  const auto g = grid_dfs(grid, factory, spec, rounds);
  const auto single = run_forecaster(make_forecaster(spec.geometry, spec.theta1, 1.0, factory(grid.points[0])), rounds);
  EXPECT_EQ(g.hyper.lambda, 0.0);
  for (std::size_t t = 0; t < rounds.size(); ++t) EXPECT_EQ(g.pool.losses[t], single.losses[t]);
}

GridTrace rotation_toy(double true_alpha) {
  const Box box = Box::uniform(2, -2.0, 2.0);
  const auto grid = build_grid(0.0, 1.0, 1, 100, 0.5);
  const DynamicsFactory factory = [box](const Vector& a) {
    return std::make_shared<LinearDynamics>(rotation(a[0]), box);
  };
  std::vector<LossRound> rounds;
  Vector theta = vec({1.0, 0.0});
  for (int t = 0; t < 100; ++t) {
    rounds.push_back(quadratic(theta));
    theta = rotation(true_alpha) * theta;
  }
  const GridExpertSpec spec{MirrorGeometry::squared_euclidean(box), vec({0.0, 0.0}), 1.0};
  return grid_dfs(grid, factory, spec, rounds);
}

TEST(GridDfs, OnGridParameterTakesTheWeight) {
  const auto g = rotation_toy(0.3);
  EXPECT_DOUBLE_EQ(g.hyper.eta_r, std::sqrt(2.0 * std::log(5.0) / 100.0));
  EXPECT_GT(g.pool.weights.back()[1], 0.9);
}

TEST(GridDfs, OffGridParameterPicksANeighbour) {
  const auto g = rotation_toy(0.36);
  const auto& w = g.pool.weights.back();
  const auto best = std::max_element(w.begin(), w.end()) - w.begin();
  EXPECT_TRUE(best == 1 || best == 2) << "best grid index " << best;
}

}  // namespace
}  // namespace dynoc
