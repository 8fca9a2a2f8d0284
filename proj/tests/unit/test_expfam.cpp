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

#include "dynoc/expfam.hpp"
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

std::vector<Vector> poisson_counts(CounterRng& rng, std::size_t rounds, Eigen::Index d, double mean) {
  std::vector<Vector> out;
  for (std::size_t t = 0; t < rounds; ++t) {
    Vector x(d);
    for (Eigen::Index i = 0; i < d; ++i) x[i] = static_cast<double>(rng.poisson(mean));
    out.push_back(x);
  }
  return out;
}

TEST(PoissonFamily, ZeroNaturalParameterHasUnitMean) {
  const auto fam = ExponentialFamily::poisson(3);
  EXPECT_EQ(fam.to_dual(Vector::Zero(3)), Vector::Ones(3));
  EXPECT_EQ(fam.log_partition(Vector::Zero(3)), 3.0);
}

TEST(PoissonFamily, DualRoundTrip) {
  const auto fam = ExponentialFamily::poisson(2);
  CounterRng rng(1, "test/roundtrip");
  for (int i = 0; i < 200; ++i) {
    const Vector theta = vec({rng.uniform(-5, 1.5), rng.uniform(-5, 1.5)});
    EXPECT_LT((fam.to_primal(fam.to_dual(theta)) - theta).cwiseAbs().maxCoeff(), 1e-13);
    const Vector mu = vec({rng.uniform(1e-3, 5), rng.uniform(1e-3, 5)});
    EXPECT_LT((fam.to_dual(fam.to_primal(mu)) - mu).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(PoissonFamily, DualLossGradientMatchesFiniteDifferences) {
  const auto fam = ExponentialFamily::poisson(3);
  CounterRng rng(2, "test/dual-grad");
  for (int i = 0; i < 100; ++i) {
    const Vector mu = vec({rng.uniform(0.2, 4), rng.uniform(0.2, 4), rng.uniform(0.2, 4)});
    const Vector x = vec({double(rng.poisson(1.0)), double(rng.poisson(2.0)), double(rng.poisson(0.5))});
    const Vector g = fam.dual_loss_gradient(mu, x);
    for (Eigen::Index k = 0; k < 3; ++k) {
      EXPECT_NEAR(g[k], 1.0 - x[k] / mu[k], 1e-15);
      Vector up = mu, down = mu;
      up[k] += 1e-6;
      down[k] -= 1e-6;
      EXPECT_NEAR(g[k], (fam.dual_loss(up, x) - fam.dual_loss(down, x)) / 2e-6, 1e-6);
    }
  }
}

TEST(PoissonFamily, DualLossIsPrimalLossAfterInversion) {
  const auto fam = ExponentialFamily::poisson(2);
  const Vector mu = vec({0.5, 2.0});
  const Vector x = vec({1.0, 3.0});
  EXPECT_NEAR(fam.dual_loss(mu, x), fam.loss(fam.to_primal(mu), x), 1e-14);
}

TEST(PoissonFamily, CurvatureIsSmallestRate) {
  const auto fam = ExponentialFamily::poisson(3);
  EXPECT_NEAR(fam.min_curvature(vec({0.0, std::log(0.25), 1.0})), 0.25, 1e-15);
  EXPECT_EQ(ExponentialFamily::gaussian(2).min_curvature(vec({3.0, -1.0})), 1.0);
}

TEST(PoissonFamily, RejectsBadBox) {
  EXPECT_THROW(ExponentialFamily::poisson(2, 0.0, 5.0), ConfigError);
  EXPECT_THROW(ExponentialFamily::poisson(2, 2.0, 1.0), ConfigError);
  EXPECT_THROW(ExponentialFamily::poisson(0), InputError);
}

TEST(GaussianFamily, DualIsIdentity) {
  const auto fam = ExponentialFamily::gaussian(2);
  const Vector theta = vec({0.3, -1.2});
  EXPECT_EQ(fam.to_dual(theta), theta);
  EXPECT_NEAR(fam.loss(theta, vec({1.0, 1.0})), 0.5 * theta.squaredNorm() - theta.sum(), 1e-15);
}

TEST(AdditiveApply, IdentityTermsLeaveThetaUnchanged) {
  const auto fam = ExponentialFamily::poisson(2);
  const AdditiveTerms terms{Matrix::Identity(2, 2), Matrix::Zero(2, 1), Vector::Zero(2)};
  const Vector theta = vec({0.2, -0.7});
  EXPECT_LT((additive_apply(fam, terms, theta, vec({3.0})) - theta).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(AdditiveApply, HalvingTheRate) {
  const auto fam = ExponentialFamily::poisson(1);
  const AdditiveTerms terms{0.5 * Matrix::Identity(1, 1), Matrix::Zero(1, 0), Vector::Zero(1)};
  EXPECT_NEAR(additive_apply(fam, terms, vec({std::log(4.0)}), Vector(0))[0], std::log(2.0), 1e-15);
}

TEST(AdditiveApply, ClampReported) {
  const auto fam = ExponentialFamily::poisson(1, 1e-6, 5.0);
  const AdditiveTerms terms{Matrix::Identity(1, 1), Matrix::Zero(1, 0), vec({10.0})};
  bool clamped = false;
  EXPECT_NEAR(additive_apply(fam, terms, vec({0.0}), Vector(0), &clamped)[0], std::log(5.0), 1e-15);
  EXPECT_TRUE(clamped);
}

TEST(AdditiveApply, DimensionMismatchIsInputError) {
  const auto fam = ExponentialFamily::poisson(2);
  const AdditiveTerms terms{Matrix::Identity(2, 2), Matrix::Zero(2, 1), Vector::Zero(2)};
  EXPECT_THROW(additive_apply(fam, terms, vec({0.0, 0.0}), vec({1.0, 2.0})), InputError);
}

TEST(HawkesAdditive, EncodesTheRateRecursion) {
  CounterRng rng(3, "test/hawkes-encoding");
  const Eigen::Index d = 4;
  const double memory = 0.6;
  Vector base(d);
  for (Eigen::Index i = 0; i < d; ++i) base[i] = rng.uniform(0.05, 0.5);
  const HawkesAdditive schedule(memory, base);
  const auto fam = ExponentialFamily::poisson(d, 1e-9, 1e9);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix w(d, d);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(0.0, 0.3);
    const auto counts = poisson_counts(rng, 3, d, 1.0);
    Vector theta(d);
    for (Eigen::Index i = 0; i < d; ++i) theta[i] = rng.uniform(-2, 1);
    const AdditiveTerms terms = schedule.at(3, counts);
    EXPECT_LT((terms.b * vectorize(w) - w * counts[2]).cwiseAbs().maxCoeff(), 1e-14);
    const Vector expected =
        (memory * theta.array().exp().matrix() + w * counts[2] + (1.0 - memory) * base).array().log().matrix();
    EXPECT_LT((additive_apply(fam, terms, theta, vectorize(w)) - expected).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(HawkesAdditive, VectorizeRoundTrip) {
  Matrix w(2, 3);
  w << 1, 2, 3, 4, 5, 6;
  EXPECT_EQ(vectorize(w), vec({1, 4, 2, 5, 3, 6}));
  EXPECT_EQ(unvectorize(vectorize(w), 2), w);
  EXPECT_THROW(unvectorize(vec({1, 2, 3}), 2), InputError);
}

TEST(KUpdate, ScalarExample) {
  const Matrix k = Matrix::Constant(1, 1, 2.0);
  const Matrix a = Matrix::Constant(1, 1, 0.5);
  const Matrix b = Matrix::Constant(1, 1, 1.0);
  EXPECT_DOUBLE_EQ(k_update(k, a, b, 0.25)(0, 0), 0.75 * 0.5 * 2.0 + 1.0);
}

TEST(KUpdate, StartingFromZeroGivesB) {
  const Matrix b = (Matrix(2, 1) << 0.3, -0.4).finished();
  EXPECT_EQ(k_update(Matrix::Zero(2, 1), Matrix::Identity(2, 2), b, 0.5), b);
}

TEST(KUpdate, MatchesUnrolledSum) {
  CounterRng rng(4, "test/k-unrolled");
  const Eigen::Index d = 3, n = 2;
  std::vector<Matrix> as, bs;
  std::vector<double> etas;
  Matrix k = Matrix::Zero(d, n);
  for (int t = 0; t < 6; ++t) {
    Matrix a(d, d), b(d, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal() * 0.4;
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = rng.normal();
    as.push_back(a);
    bs.push_back(b);
    etas.push_back(rng.uniform(0.1, 0.9));
    k = k_update(k, a, b, etas.back());
  }
  // K_7 = Σ_s [Π_{r>s} (1 − η_r)A_r] B_s.
  Matrix expected = Matrix::Zero(d, n);
  for (int s = 0; s < 6; ++s) {
    Matrix term = bs[s];
    for (int r = s + 1; r < 6; ++r) term = (1.0 - etas[r]) * as[r] * term;
    expected += term;
  }
  EXPECT_LT((k - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Transport, EqualParametersReturnTheSamePrediction) {
  const Vector mu = vec({0.5, 1.5});
  const Matrix k = (Matrix(2, 2) << 1, 2, 3, 4).finished();
  EXPECT_EQ(sensitivity_transport(mu, k, vec({0.3, 0.1}), vec({0.3, 0.1})), mu);
  EXPECT_EQ(sensitivity_transport(mu, Matrix::Zero(2, 2), vec({9, 9}), vec({0, 0})), mu);
  EXPECT_EQ(sensitivity_transport(mu, k, vec({1, 0}), vec({0, 0})), vec({1.5, 4.5}));
}

TEST(Transport, MatchesIndependentRuns) {
  const auto r = check_transport_bound(10, 15, 5);
  EXPECT_TRUE(r.passed) << r.detail;
  EXPECT_LE(r.worst, 1e-10);
}

TEST(Transport, BrokenRecursionIsDetected) {
  const KUpdateFn broken = [](const Matrix& k, const Matrix& a, const Matrix& b, double eta) {
    return Matrix((1.0 + eta) * a * k + b);
  };
  EXPECT_FALSE(check_transport_bound(10, 15, 5, broken).passed);
  EXPECT_FALSE(check_k_recursion(20, 5, broken).passed);
}

class JointStepTest : public ::testing::Test {
 protected:
  ExponentialFamily fam = ExponentialFamily::poisson(2, 1e-6, 5.0);
  AdditiveTerms terms{(Matrix(2, 2) << 0.5, 0.1, 0.0, 0.4).finished(), (Matrix(2, 1) << 0.3, 0.2).finished(),
                      vec({0.1, 0.2})};
  Box alpha_box = Box::uniform(1, 0.0, 2.0);
};

TEST_F(JointStepTest, MatchesHandUnrolledRecursion) {
  const ConstantAdditive schedule(terms);
  CounterRng rng(6, "test/joint-hand");
  const auto counts = poisson_counts(rng, 5, 2, 1.0);
  JointState state = make_joint_state(fam, vec({0.0, -0.5}), vec({1.0}), 0.8, 0.3);

  // Plain scalar arithmetic on rates, independent of the library.
  double mu[2] = {1.0, std::exp(-0.5)};
  double k[2] = {0.0, 0.0};
  double alpha = 1.0;
  const double a[2][2] = {{0.5, 0.1}, {0.0, 0.4}};
  const double b[2] = {0.3, 0.2};
  const double c[2] = {0.1, 0.2};
  for (std::size_t t = 1; t <= 5; ++t) {
    const Vector& x = counts[t - 1];
    const double eta = 0.8 / std::sqrt(double(t));
    const double rho = 0.3 / std::sqrt(double(t));
    const double expected_loss = mu[0] + mu[1] - x[0] * std::log(mu[0]) - x[1] * std::log(mu[1]);
    const double grad = k[0] * (1.0 - x[0] / mu[0]) + k[1] * (1.0 - x[1] / mu[1]);
    const double alpha_next = std::clamp(alpha - rho * grad, 0.0, 2.0);
    double blend[2], next[2];
    for (int i = 0; i < 2; ++i) {
      const double prime = mu[i] + k[i] * (alpha_next - alpha);
      blend[i] = std::clamp((1.0 - eta) * prime + eta * x[i], 1e-6, 5.0);
    }
    for (int i = 0; i < 2; ++i) {
      next[i] = std::clamp(a[i][0] * blend[0] + a[i][1] * blend[1] + b[i] * alpha_next + c[i], 1e-6, 5.0);
    }
    const double k0 = (1.0 - eta) * (a[0][0] * k[0] + a[0][1] * k[1]) + b[0];
    const double k1 = (1.0 - eta) * (a[1][0] * k[0] + a[1][1] * k[1]) + b[1];

    const auto out = joint_step(state, fam, schedule, alpha_box, std::span(counts).first(t));
    EXPECT_NEAR(out.loss, expected_loss, 1e-10) << "round " << t;
    mu[0] = next[0];
    mu[1] = next[1];
    k[0] = k0;
    k[1] = k1;
    alpha = alpha_next;
    EXPECT_NEAR(state.alpha_hat[0], alpha, 1e-10) << "round " << t;
    EXPECT_NEAR(state.mu_hat[0], mu[0], 1e-10) << "round " << t;
    EXPECT_NEAR(state.mu_hat[1], mu[1], 1e-10) << "round " << t;
    EXPECT_NEAR(state.k(0, 0), k[0], 1e-12);
    EXPECT_NEAR(state.k(1, 0), k[1], 1e-12);
  }
  EXPECT_EQ(state.t, 6u);
}

// Runs DMD on Poisson losses with Φ(·, α) fixed.
std::vector<double> fixed_parameter_dmd(const ExponentialFamily& fam, const AdditiveTerms& terms,
                                        const Vector& theta1, const Vector& alpha, double eta0,
                                        const std::vector<Vector>& counts) {
  const auto schedule = std::make_shared<ConstantAdditive>(terms);
  ForecasterState state = make_forecaster(fam.geometry(), theta1, eta0,
                                          std::make_shared<AdditiveDynamicsModel>(fam, schedule, alpha));
  std::vector<double> losses;
  for (const auto& x : counts) losses.push_back(dmd_step(state, {x, fam.make_loss(x)}).loss);
  return losses;
}

TEST_F(JointStepTest, EmptyParameterIsPlainDmd) {
  const AdditiveTerms no_param{terms.a, Matrix::Zero(2, 0), terms.c};
  CounterRng rng(7, "test/joint-n0");
  const auto counts = poisson_counts(rng, 100, 2, 0.8);
  const auto trace = run_joint(make_joint_state(fam, vec({0.0, 0.0}), Vector(0), 0.7, 0.5), fam,
                               ConstantAdditive(no_param), Box::unbounded(1), counts);
  const auto reference = fixed_parameter_dmd(fam, no_param, vec({0.0, 0.0}), Vector(0), 0.7, counts);
  ASSERT_TRUE(trace.complete) << trace.error;
  for (std::size_t t = 0; t < counts.size(); ++t) EXPECT_NEAR(trace.losses[t], reference[t], 1e-10);
}

TEST_F(JointStepTest, ZeroParameterRateFreezesAlpha) {
  CounterRng rng(8, "test/joint-rho0");
  const auto counts = poisson_counts(rng, 100, 2, 0.8);
  const auto trace = run_joint(make_joint_state(fam, vec({0.0, 0.0}), vec({0.7}), 0.7, 0.0), fam,
                               ConstantAdditive(terms), alpha_box, counts);
  const auto reference = fixed_parameter_dmd(fam, terms, vec({0.0, 0.0}), vec({0.7}), 0.7, counts);
  EXPECT_EQ(trace.final_alpha, vec({0.7}));
  for (std::size_t t = 0; t < counts.size(); ++t) EXPECT_NEAR(trace.losses[t], reference[t], 1e-10);
}

TEST_F(JointStepTest, RunWithoutRoundsIsEmpty) {
  const auto trace = run_joint(make_joint_state(fam, vec({0.0, 0.0}), vec({0.5}), 1.0, 0.1), fam,
                               ConstantAdditive(terms), alpha_box, std::span<const Vector>());
  EXPECT_TRUE(trace.complete);
  EXPECT_TRUE(trace.losses.empty());
  EXPECT_EQ(trace.final_alpha, vec({0.5}));
}

TEST_F(JointStepTest, ParameterStaysInItsBox) {
  CounterRng rng(9, "test/joint-box");
  const auto counts = poisson_counts(rng, 300, 2, 3.0);
  const Vector truth = vec({1.5});
  const auto trace = run_joint(make_joint_state(fam, vec({0.0, 0.0}), vec({0.0}), 0.9, 5.0), fam,
                               ConstantAdditive(terms), alpha_box, counts, &truth);
  ASSERT_TRUE(trace.complete);
  EXPECT_TRUE(alpha_box.contains(trace.final_alpha));
  EXPECT_EQ(trace.alpha_error.size(), counts.size());
}

TEST_F(JointStepTest, ShortHistoryIsRejected) {
  JointState state = make_joint_state(fam, vec({0.0, 0.0}), vec({0.5}), 1.0, 0.1);
  EXPECT_THROW(joint_step(state, fam, ConstantAdditive(terms), alpha_box, {}), InputError);
  EXPECT_THROW(make_joint_state(fam, vec({9.0, 0.0}), vec({0.5}), 1.0, 0.1), InputError);
  EXPECT_THROW(make_joint_state(fam, vec({0.0, 0.0}), vec({0.5}), 1.0, -0.1), ConfigError);
}

TEST(ExpfamInvariants, SuiteIsGreen) {
  for (const auto& r : run_invariants("expfam")) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
}

}  // namespace
}  // namespace dynoc
