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

#include "dynoc/expfam.hpp"

#include <algorithm>
#include <cmath>

namespace dynoc {
namespace {

class GaussianFamilyLoss final : public SmoothLoss {
 public:
  explicit GaussianFamilyLoss(Vector x) : x_(std::move(x)) {}
  double value(const Vector& theta) const override { return 0.5 * theta.squaredNorm() - x_.dot(theta); }
  Vector gradient(const Vector& theta) const override { return theta - x_; }

 private:
  Vector x_;
};

}  // namespace

ExponentialFamily ExponentialFamily::poisson(Eigen::Index dim, double floor, double ceiling) {
  if (dim < 1) throw InputError("poisson family: dimension must be >= 1");
  if (!(floor > 0.0) || !(ceiling > floor) || !std::isfinite(ceiling)) {
    throw ConfigError("poisson family: need 0 < floor < ceiling < inf");
  }
  return ExponentialFamily(Kind::kPoisson, Box::uniform(dim, std::log(floor), std::log(ceiling)),
                           Box::uniform(dim, floor, ceiling));
}

ExponentialFamily ExponentialFamily::gaussian(Eigen::Index dim, double bound) {
  if (dim < 1) throw InputError("gaussian family: dimension must be >= 1");
  if (!(bound > 0.0)) throw ConfigError("gaussian family: bound must be > 0");
  Box box = Box::uniform(dim, -bound, bound);
  return ExponentialFamily(Kind::kGaussian, box, box);
}

double ExponentialFamily::log_partition(const Vector& theta) const {
  return kind_ == Kind::kPoisson ? theta.array().exp().sum() : 0.5 * theta.squaredNorm();
}

Vector ExponentialFamily::to_dual(const Vector& theta) const {
  if (kind_ == Kind::kGaussian) return theta;
  return theta.array().exp().matrix();
}

Vector ExponentialFamily::to_primal(const Vector& mu) const {
  if (kind_ == Kind::kGaussian) return mu;
  return mu.array().log().matrix();
}

Vector ExponentialFamily::clamp_dual(const Vector& mu, bool* clamped) const {
  Vector out = dual_.clip(mu);
  if (clamped && out != mu) *clamped = true;
  return out;
}

double ExponentialFamily::loss(const Vector& theta, const Vector& x) const {
  return log_partition(theta) - statistic(x).dot(theta);
}

double ExponentialFamily::dual_loss(const Vector& mu, const Vector& x) const {
  if (kind_ == Kind::kGaussian) return 0.5 * mu.squaredNorm() - x.dot(mu);
  return mu.sum() - x.dot(mu.array().log().matrix());
}

Vector ExponentialFamily::dual_loss_gradient(const Vector& mu, const Vector& x) const {
  if (kind_ == Kind::kGaussian) return mu - x;
  return (1.0 - x.array() / mu.array()).matrix();
}

double ExponentialFamily::min_curvature(const Vector& theta) const {
  return kind_ == Kind::kPoisson ? theta.array().exp().minCoeff() : 1.0;
}

MirrorGeometry ExponentialFamily::geometry() const {
  return kind_ == Kind::kPoisson ? MirrorGeometry::poisson(primal_)
                                 : MirrorGeometry::squared_euclidean(primal_);
}

std::shared_ptr<const SmoothLoss> ExponentialFamily::make_loss(const Vector& x) const {
  if (kind_ == Kind::kPoisson) return std::make_shared<PoissonLoss>(x);
  return std::make_shared<GaussianFamilyLoss>(x);
}

ConstantAdditive::ConstantAdditive(AdditiveTerms terms) : terms_(std::move(terms)) {
  const auto d = terms_.a.rows();
  if (d < 1 || terms_.a.cols() != d || terms_.b.rows() != d || terms_.c.size() != d) {
    throw InputError("ConstantAdditive: A must be d×d, B d×n and c of length d");
  }
}

HawkesAdditive::HawkesAdditive(double memory, Vector base_rate)
    : memory_(memory), base_rate_(std::move(base_rate)) {
  if (!(memory_ >= 0.0 && memory_ < 1.0)) throw InputError("HawkesAdditive: memory must be in [0,1)");
  if (base_rate_.size() < 1) throw InputError("HawkesAdditive: empty base rate");
}

AdditiveTerms HawkesAdditive::at(std::size_t t, History history) const {
  const auto d = base_rate_.size();
  if (t < 1 || history.size() < t) throw InputError("HawkesAdditive: needs x_1..x_t");
  const Vector& x = history[t - 1];
  require_vector(x, d, "HawkesAdditive observation");
  AdditiveTerms terms;
  terms.a = memory_ * Matrix::Identity(d, d);
  terms.b = Matrix::Zero(d, d * d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) terms.b(i, j * d + i) = x[j];
  }
  terms.c = (1.0 - memory_) * base_rate_;
  return terms;
}

Vector vectorize(const Matrix& w) { return Eigen::Map<const Vector>(w.data(), w.size()); }

Matrix unvectorize(const Vector& alpha, Eigen::Index rows) {
  if (rows < 1 || alpha.size() % rows != 0) throw InputError("unvectorize: size is not a multiple of rows");
  return Eigen::Map<const Matrix>(alpha.data(), rows, alpha.size() / rows);
}

Vector additive_apply(const ExponentialFamily& fam, const AdditiveTerms& terms, const Vector& theta,
                      const Vector& alpha, bool* clamped) {
  const auto d = fam.dim();
  require_vector(theta, d, "additive_apply theta");
  if (terms.a.rows() != d || terms.a.cols() != d || terms.b.rows() != d || terms.c.size() != d ||
      terms.b.cols() != alpha.size()) {
    throw InputError("additive_apply: dimensions of A, B, c, theta and alpha disagree");
  }
  const Vector dual = terms.a * fam.to_dual(theta) + terms.b * alpha + terms.c;
  return fam.primal_box().clip(fam.to_primal(fam.clamp_dual(dual, clamped)));
}

AdditiveDynamicsModel::AdditiveDynamicsModel(ExponentialFamily family,
                                             std::shared_ptr<const AdditiveSchedule> schedule,
                                             Vector alpha)
    : DynamicsModel(family.primal_box()),
      family_(std::move(family)),
      schedule_(std::move(schedule)),
      alpha_(std::move(alpha)) {
  if (!schedule_) throw InputError("AdditiveDynamicsModel: missing schedule");
  if (schedule_->state_dim() != dim() || schedule_->param_dim() != alpha_.size()) {
    throw InputError("AdditiveDynamicsModel: schedule dimensions disagree with family or alpha");
  }
}

Vector AdditiveDynamicsModel::map(std::size_t t, const Vector& theta, History history) const {
  return additive_apply(family_, schedule_->at(t, history), theta, alpha_);
}

Matrix k_update(const Matrix& k, const Matrix& a, const Matrix& b, double eta) {
  if (a.rows() != k.rows() || a.cols() != k.rows() || b.rows() != k.rows() || b.cols() != k.cols()) {
    throw InputError("k_update: dimensions of K, A and B disagree");
  }
  return (1.0 - eta) * a * k + b;
}

Vector sensitivity_transport(const Vector& mu_beta, const Matrix& k, const Vector& alpha,
                             const Vector& beta) {
  if (k.rows() != mu_beta.size() || k.cols() != alpha.size() || alpha.size() != beta.size()) {
    throw InputError("sensitivity_transport: dimensions disagree");
  }
  return mu_beta + k * (alpha - beta);
}

JointState make_joint_state(const ExponentialFamily& fam, Vector theta1, Vector alpha1,
                            double eta0, double rho0) {
  if (!fam.primal_box().contains(theta1)) throw InputError("make_joint_state: theta1 outside the domain");
  if (!alpha1.allFinite()) throw InputError("make_joint_state: non-finite alpha1");
  if (!(eta0 > 0.0) || !std::isfinite(eta0)) throw ConfigError("make_joint_state: eta0 must be > 0");
  if (!(rho0 >= 0.0) || !std::isfinite(rho0)) throw ConfigError("make_joint_state: rho0 must be >= 0");
  JointState s;
  s.mu_hat = fam.to_dual(theta1);
  s.theta_hat = std::move(theta1);
  s.k = Matrix::Zero(fam.dim(), alpha1.size());
  s.alpha_hat = std::move(alpha1);
  s.eta = StepSchedule{eta0};
  s.rho = StepSchedule{rho0};
  return s;
}

JointStepOutcome joint_step(JointState& state, const ExponentialFamily& fam,
                           const AdditiveSchedule& schedule, const Box& alpha_box,
                           History history, const KUpdateFn& update) {
  const std::size_t t = state.t;
  if (history.size() < t) throw InputError("joint_step: history must hold x_1..x_t");
  const Vector& x = history[t - 1];
  require_vector(x, fam.dim(), "joint_step observation");
  if (state.alpha_hat.size() > 0 && alpha_box.dim() != state.alpha_hat.size()) throw InputError("joint_step: parameter box dimension");

  JointStepOutcome out;
  out.loss = fam.loss(state.theta_hat, x);
  const double eta = state.eta.at(t);
  const double rho = state.rho.at(t);

  Vector alpha_next = state.alpha_hat;
  if (rho > 0.0 && alpha_next.size() > 0) {
    const Vector grad = state.k.transpose() * fam.dual_loss_gradient(state.mu_hat, x);
    alpha_next = alpha_box.clip(state.alpha_hat - rho * grad);
  }
  const Vector mu_prime = state.mu_hat + state.k * (alpha_next - state.alpha_hat);
  const Vector mu_tilde = (1.0 - eta) * mu_prime + eta * fam.statistic(x);
  const Vector theta_tilde = fam.to_primal(fam.clamp_dual(mu_tilde, &out.clamped));

  const AdditiveTerms terms = schedule.at(t, history);
  Vector theta_next = additive_apply(fam, terms, theta_tilde, alpha_next, &out.clamped);
  state.k = update(state.k, terms.a, terms.b, eta);
  state.mu_hat = fam.to_dual(theta_next);
  state.theta_hat = std::move(theta_next);
  state.alpha_hat = std::move(alpha_next);
  ++state.t;
  return out;
}

JointTrace run_joint(JointState state, const ExponentialFamily& fam,
                    const AdditiveSchedule& schedule, const Box& alpha_box,
                    std::span<const Vector> observations, const Vector* true_alpha,
                    const ComparatorSequence* comparator, std::size_t stride) {
  JointTrace trace;
  if (comparator) {
    if (comparator->size() < observations.size()) throw InputError("run_joint: comparator is too short");
    trace.ledger.emplace();
  }
  if (true_alpha && true_alpha->size() != state.alpha_hat.size()) {
    throw InputError("run_joint: true parameter has the wrong dimension");
  }
  const double alpha_scale = true_alpha ? std::max(true_alpha->norm(), 1e-300) : 1.0;

  for (std::size_t i = 0; i < observations.size(); ++i) {
    const std::size_t t = state.t;
    if (stride > 0 && i % stride == 0) trace.predictions.emplace_back(t, state.theta_hat);
    try {
      const double comparator_loss =
          comparator ? fam.loss((*comparator)[i], observations[i]) : 0.0;
      const auto out = joint_step(state, fam, schedule, alpha_box, observations.first(i + 1));
      trace.losses.push_back(out.loss);
      trace.clamped.push_back(out.clamped);
      if (true_alpha) trace.alpha_error.push_back((state.alpha_hat - *true_alpha).norm() / alpha_scale);
      if (comparator) trace.ledger->record(t, out.loss, comparator_loss);
    } catch (const std::exception& e) {
      trace.complete = false;
      trace.error = "round " + std::to_string(t) + ": " + e.what();
      break;
    }
  }
  trace.final_alpha = state.alpha_hat;
  return trace;
}

}  // namespace dynoc
