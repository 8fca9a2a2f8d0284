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
#include <cstring>

#include "dynoc/experiments.hpp"
#include "dynoc/forecaster.hpp"
#include "dynoc/invariants.hpp"
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

bool same_bits(const Vector& a, const Vector& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

TEST(DmdStep, HandEvaluatedLinearExample) {
  const auto geom = MirrorGeometry::squared_euclidean(Box::unbounded(1));
  const auto half = std::make_shared<LinearDynamics>(0.5 * Matrix::Identity(1, 1), geom.domain());
  ForecasterState s = make_forecaster(geom, vec({0.0}), 0.5, half);
  const StepOutcome out = dmd_step(s, quadratic(vec({1.0})));
  EXPECT_EQ(out.loss, 0.5);
  EXPECT_EQ(out.theta_tilde, vec({0.5}));
  EXPECT_EQ(s.theta_hat, vec({0.25}));
  EXPECT_EQ(s.t, 2u);
}

TEST(DmdStep, ZeroGradientIsFixedPoint) {
  const auto geom = MirrorGeometry::squared_euclidean(Box::unbounded(2));
  ForecasterState s = make_forecaster(geom, vec({0.3, -0.4}), 1.0,
                                      std::make_shared<IdentityDynamics>(geom.domain()));
  dmd_step(s, quadratic(vec({0.3, -0.4})));
  EXPECT_EQ(s.theta_hat, vec({0.3, -0.4}));
}

TEST(DmdStep, IdentityDynamicsMatchesComidBitwise) {
  CounterRng rng(1, "test/dmd-comid");
  const auto geom = MirrorGeometry::squared_euclidean(Box::uniform(3, -1.0, 1.0));
  const auto reg = Regularizer::l1(0.05);
  ForecasterState a = make_forecaster(geom, vec({0.1, 0.2, -0.3}), 0.8,
                                      std::make_shared<IdentityDynamics>(geom.domain()), reg);
  ForecasterState b = make_forecaster(geom, vec({0.1, 0.2, -0.3}), 0.8, nullptr, reg);
  for (int t = 0; t < 100; ++t) {
    const LossRound r = quadratic(vec({rng.normal(), rng.normal(), rng.normal()}));
    const double la = dmd_step(a, r).loss;
    const double lb = comid_step(b, r);
    ASSERT_EQ(std::memcmp(&la, &lb, sizeof(double)), 0);
    ASSERT_TRUE(same_bits(a.theta_hat, b.theta_hat)) << "round " << t;
  }
}

TEST(DmdStep, PredictionStaysInDomain) {
  CounterRng rng(2, "test/domain");
  const auto geom = MirrorGeometry::squared_euclidean(Box::uniform(2, -0.5, 0.5));
  const auto expand = std::make_shared<LinearDynamics>(3.0 * Matrix::Identity(2, 2), geom.domain());
  ForecasterState s = make_forecaster(geom, vec({0.0, 0.0}), 1.0, expand);
  for (int t = 0; t < 200; ++t) {
    dmd_step(s, quadratic(vec({5 * rng.normal(), 5 * rng.normal()})));
    ASSERT_TRUE(geom.domain().contains(s.theta_hat));
  }
}

TEST(ComidStep, LargeL1DrivesToExactZero) {
  const auto geom = MirrorGeometry::squared_euclidean(Box::unbounded(3));
  ForecasterState s = make_forecaster(geom, vec({0.4, -0.2, 0.1}), 1.0, nullptr, Regularizer::l1(10.0));
  comid_step(s, quadratic(vec({0.5, -0.5, 0.0})));
  EXPECT_EQ(s.theta_hat, Vector::Zero(3));
}

TEST(ComidStep, MatchesMdWithoutRegularizer) {
  CounterRng rng(3, "test/comid-md");
  const auto geom = MirrorGeometry::poisson(Box::uniform(2, -3.0, 2.0));
  ForecasterState a = make_forecaster(geom, vec({0.0, 0.0}), 0.9);
  ForecasterState b = make_forecaster(geom, vec({0.0, 0.0}), 0.9);
  for (int t = 0; t < 50; ++t) {
    const Vector x = vec({static_cast<double>(rng.poisson(1.0)), static_cast<double>(rng.poisson(2.0))});
    const LossRound r{x, std::make_shared<PoissonLoss>(x)};
    EXPECT_EQ(comid_step(a, r), md_step(b, r));
    ASSERT_TRUE(same_bits(a.theta_hat, b.theta_hat));
  }
}

TEST(MdStep, ZeroGradientDoesNotMove) {
  const auto geom = MirrorGeometry::squared_euclidean(Box::unbounded(2));
  ForecasterState s = make_forecaster(geom, vec({1.0, 2.0}), 1.0);
  md_step(s, quadratic(vec({1.0, 2.0})));
  EXPECT_EQ(s.theta_hat, vec({1.0, 2.0}));
}

TEST(MdStep, ClosedFormGradientStep) {
  const auto geom = MirrorGeometry::squared_euclidean(Box::unbounded(2));
  ForecasterState s = make_forecaster(geom, vec({0.0, 0.0}), 0.25);
  // ∇f(0) = 0 − target = (2, 0).
  md_step(s, quadratic(vec({-2.0, 0.0})));
  EXPECT_EQ(s.theta_hat, vec({-0.5, 0.0}));
}

TEST(MdStep, DiffersFromComidAndEachMatchesItsGridMinimizer) {
  const auto geom = MirrorGeometry::squared_euclidean(Box::uniform(1, -2.0, 2.0));
  const double tau = 1.0, eta = 1.0, anchor = 0.5, target = 0.4;  // ∇f(anchor) = 0.1
  ForecasterState md = make_forecaster(geom, vec({anchor}), eta, nullptr, Regularizer::l1(tau));
  ForecasterState comid = make_forecaster(geom, vec({anchor}), eta, nullptr, Regularizer::l1(tau));
  md_step(md, quadratic(vec({target})));
  comid_step(comid, quadratic(vec({target})));

  const double g = anchor - target;
  double md_best = 0.0, comid_best = 0.0, md_value = INFINITY, comid_value = INFINITY;
  for (int i = 0; i <= 40000; ++i) {
    const double x = -2.0 + i * 1e-4;
    const double d = 0.5 * (x - anchor) * (x - anchor);
    const double m = eta * (g + tau) * x + d;  // linearized regularizer, sign(anchor) = 1
    const double c = eta * g * x + eta * tau * std::abs(x) + d;
    if (m < md_value) md_value = m, md_best = x;
    if (c < comid_value) comid_value = c, comid_best = x;
  }
  EXPECT_NEAR(md.theta_hat[0], md_best, 1e-3);
  EXPECT_NEAR(comid.theta_hat[0], comid_best, 1e-3);
  EXPECT_GT(std::abs(md.theta_hat[0] - comid.theta_hat[0]), 0.5);
}

TEST(RunForecaster, ZeroRoundsGiveEmptyTrace) {
  const auto geom = MirrorGeometry::squared_euclidean(Box::unbounded(1));
  const auto trace = run_forecaster(make_forecaster(geom, vec({0.0}), 1.0), {}, UpdateRule::kDmd);
  EXPECT_TRUE(trace.losses.empty());
  EXPECT_TRUE(trace.complete);
}

TEST(RunForecaster, ThreeRoundHandOracle) {
  const auto geom = MirrorGeometry::squared_euclidean(Box::unbounded(1));
  const std::vector<LossRound> rounds{quadratic(vec({1.0})), quadratic(vec({2.0})), quadratic(vec({3.0}))};
  const auto trace = run_forecaster(make_forecaster(geom, vec({0.0}), 1.0), rounds, UpdateRule::kDmd, nullptr, 1);
  // θ̂ = 0, then 0 + 1·1 = 1, then 1 + (1/√2)·1.
  const double third = 1.0 + 1.0 / std::sqrt(2.0);
  ASSERT_EQ(trace.losses.size(), 3u);
  EXPECT_DOUBLE_EQ(trace.losses[0], 0.5);
  EXPECT_DOUBLE_EQ(trace.losses[1], 0.5);
  EXPECT_NEAR(trace.losses[2], 0.5 * (3.0 - third) * (3.0 - third), 1e-15);
  EXPECT_NEAR(trace.predictions[2].second[0], third, 1e-15);
}

TEST(RunForecaster, RecordsRegretAndVariation) {
  const auto geom = MirrorGeometry::squared_euclidean(Box::unbounded(1));
  const std::vector<LossRound> rounds{quadratic(vec({1.0})), quadratic(vec({2.0})), quadratic(vec({3.0}))};
  const ComparatorSequence comp{vec({1.0}), vec({2.0}), vec({3.0})};
  const auto trace = run_forecaster(make_forecaster(geom, vec({0.0}), 1.0), rounds, UpdateRule::kDmd, &comp);
  ASSERT_TRUE(trace.ledger.has_value());
  double total = 0.0;
  for (double l : trace.losses) total += l;
  EXPECT_DOUBLE_EQ(trace.ledger->regret(), total);
  ASSERT_TRUE(trace.comparator_variation.has_value());
  EXPECT_DOUBLE_EQ(*trace.comparator_variation, 2.0);
}

TEST(RunForecaster, StepFailureFlagsIncompleteTrace) {
  const auto geom = MirrorGeometry::squared_euclidean(Box::unbounded(1));
  const std::vector<LossRound> rounds{quadratic(vec({1.0})), quadratic(vec({1.0, 2.0})), quadratic(vec({1.0}))};
  const auto trace = run_forecaster(make_forecaster(geom, vec({0.0}), 1.0), rounds);
  EXPECT_FALSE(trace.complete);
  EXPECT_EQ(trace.losses.size(), 1u);
  EXPECT_EQ(trace.error.rfind("round 2:", 0), 0u) << trace.error;
}

TEST(RunForecaster, StrideDecimatesPredictions) {
  const auto geom = MirrorGeometry::squared_euclidean(Box::unbounded(1));
  std::vector<LossRound> rounds(10, quadratic(vec({1.0})));
  const auto none = run_forecaster(make_forecaster(geom, vec({0.0}), 1.0), rounds);
  EXPECT_TRUE(none.predictions.empty());
  const auto every3 = run_forecaster(make_forecaster(geom, vec({0.0}), 1.0), rounds, UpdateRule::kDmd, nullptr, 3);
  ASSERT_EQ(every3.predictions.size(), 4u);
  EXPECT_EQ(every3.predictions[1].first, 4u);
}

TEST(TrackingBound, ComparatorEqualToIteratesIsNonnegative) {
  CounterRng rng(4, "test/tracking-self");
  const auto geom = MirrorGeometry::squared_euclidean(Box::uniform(2, -5.0, 5.0));
  const auto phi = std::make_shared<LinearDynamics>(0.9 * Matrix::Identity(2, 2), geom.domain());
  std::vector<LossRound> rounds;
  for (int t = 0; t < 100; ++t) rounds.push_back(quadratic(vec({rng.normal(), rng.normal()})));
  const auto initial = make_forecaster(geom, vec({1.0, -1.0}), 1.0, phi);
  const auto trace = run_forecaster(initial, rounds, UpdateRule::kDmd, nullptr, 1);
  ComparatorSequence self;
  for (const auto& [t, th] : trace.predictions) self.push_back(th);
  for (double r : audit_tracking_bound(initial, rounds, self)) EXPECT_GE(r, 0.0);
}

TEST(TrackingBound, StaticComparatorIdentityDynamics) {
  CounterRng rng(5, "test/tracking-static");
  const auto geom = MirrorGeometry::squared_euclidean(Box::uniform(3, -5.0, 5.0));
  std::vector<LossRound> rounds;
  for (int t = 0; t < 200; ++t) rounds.push_back(quadratic(vec({rng.normal(), rng.normal(), rng.normal()})));
  const ComparatorSequence comp(200, vec({0.5, 0.5, -0.5}));
  const auto res = audit_tracking_bound(make_forecaster(geom, vec({0, 0, 0}), 1.0,
                                                std::make_shared<IdentityDynamics>(geom.domain())),
                                rounds, comp);
  EXPECT_GE(*std::min_element(res.begin(), res.end()), -1e-8);
}

TEST(TrackingBound, FollowingComparatorVariationVanishes) {
  CounterRng rng(6, "test/tracking-follow");
  const auto geom = MirrorGeometry::squared_euclidean(Box::uniform(2, -5.0, 5.0));
  Matrix rot(2, 2);
  rot << std::cos(0.2), -std::sin(0.2), std::sin(0.2), std::cos(0.2);
  const auto phi = std::make_shared<LinearDynamics>(0.95 * rot, geom.domain());
  ComparatorSequence comp{vec({3.0, 0.0})};
  for (std::size_t t = 1; t < 200; ++t) comp.push_back(phi->apply(t, comp.back()));
  std::vector<LossRound> rounds;
  for (const auto& c : comp) rounds.push_back(quadratic(c + vec({rng.normal(), rng.normal()})));
  EXPECT_NEAR(variation(*phi, comp), 0.0, 1e-12);
  const auto res = audit_tracking_bound(make_forecaster(geom, vec({0, 0}), 1.0, phi), rounds, comp);
  EXPECT_GE(*std::min_element(res.begin(), res.end()), -1e-8);
}

TEST(TrackingBound, RandomizedSuite) {
  const auto r = check_tracking_bound(6, 100, 17);
  EXPECT_TRUE(r.passed) << r.detail << " worst=" << r.worst;
}

TEST(RegretScaling, RegretOverSqrtTStaysBoundedAndBelowBound) {
  const auto points = regret_scaling({200, 800}, 3, 5);
  ASSERT_EQ(points.size(), 2u);
  for (const auto& p : points) {
    EXPECT_LE(p.max_run_excess, 0.0);
    EXPECT_GT(p.normalized, 0.0);
  }
  EXPECT_LT(std::max(points[0].normalized, points[1].normalized) /
                std::min(points[0].normalized, points[1].normalized),
            3.0);
}

}  // namespace
}  // namespace dynoc
