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

#include "dynoc/forecaster.hpp"

#include <algorithm>

namespace dynoc {
namespace {

void require_round(const ForecasterState& state, const LossRound& round) {
  if (!round.loss) throw InputError("loss round has no loss evaluator");
  require_vector(state.theta_hat, state.geometry.dim(), "forecaster prediction");
}

Vector prox_step(const ForecasterState& state, const Vector& gradient, const Regularizer& reg) {
  return composite_prox(state.geometry, state.theta_hat,
                        CompositeObjective{gradient, reg, state.schedule.at(state.t)});
}

}  // namespace

ForecasterState make_forecaster(MirrorGeometry geometry, Vector theta1, double eta0,
                                DynamicsPtr dynamics, Regularizer regularizer) {
  if (!(eta0 > 0.0) || !std::isfinite(eta0)) throw ConfigError("step size eta0 must be > 0");
  if (!geometry.domain().contains(theta1)) throw InputError("initial prediction is outside the domain");
  if (dynamics && dynamics->dim() != geometry.dim()) {
    throw InputError("dynamics dimension does not match the geometry");
  }
  return ForecasterState{std::move(theta1), 1, StepSchedule{eta0}, std::move(geometry),
                         std::move(dynamics), regularizer};
}

double round_loss(const ForecasterState& state, const LossRound& round, const Vector& theta) {
  return round.loss->value(theta) + state.regularizer.value(theta);
}

StepOutcome dmd_step(ForecasterState& state, const LossRound& round, History history) {
  require_round(state, round);
  StepOutcome out;
  out.loss = round_loss(state, round, state.theta_hat);
  out.theta_tilde = prox_step(state, round.loss->gradient(state.theta_hat), state.regularizer);
  state.theta_hat =
      state.dynamics ? state.dynamics->apply(state.t, out.theta_tilde, history) : out.theta_tilde;
  ++state.t;
  return out;
}

double comid_step(ForecasterState& state, const LossRound& round) {
  require_round(state, round);
  const double loss = round_loss(state, round, state.theta_hat);
  state.theta_hat = prox_step(state, round.loss->gradient(state.theta_hat), state.regularizer);
  ++state.t;
  return loss;
}

double md_step(ForecasterState& state, const LossRound& round) {
  require_round(state, round);
  const double loss = round_loss(state, round, state.theta_hat);
  const Vector full = round.loss->gradient(state.theta_hat) +
                      state.regularizer.subgradient(state.theta_hat);
  state.theta_hat = prox_step(state, full, Regularizer::none());
  ++state.t;
  return loss;
}

double tracking_residual(const MirrorGeometry& geom, const TrackingRoundTerms& terms) {
  const double eta = terms.eta;
  const double lhs = terms.forecaster_loss - terms.comparator_loss;
  const double rhs =
      (bregman(geom, terms.comparator, terms.theta_hat) -
       bregman(geom, terms.comparator_next, terms.theta_hat_next)) / eta +
      terms.distortion / eta +
      2.0 * terms.lipschitz_mirror / eta * (terms.comparator_next - terms.comparator_mapped).norm() +
      eta / (2.0 * geom.sigma()) * terms.lipschitz_loss * terms.lipschitz_loss;
  return rhs - lhs;
}

std::vector<Vector> observations_of(std::span<const LossRound> rounds) {
  std::vector<Vector> obs;
  obs.reserve(rounds.size());
  for (const auto& r : rounds) obs.push_back(r.observation);
  return obs;
}

std::vector<double> audit_tracking_bound(ForecasterState state, std::span<const LossRound> rounds,
                                 const ComparatorSequence& comparator, double distortion) {
  if (comparator.size() < rounds.size()) throw InputError("audit_tracking_bound: comparator is too short");
  const auto obs = observations_of(rounds);
  const auto mapped = [&](std::size_t t, const Vector& theta, History h) {
    return state.dynamics ? state.dynamics->apply(t, theta, h) : theta;
  };

  std::vector<double> residuals;
  residuals.reserve(rounds.size());
  double g_max = 0.0;
  double m_max = 0.0;
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    const LossRound& round = rounds[i];
    const History history(obs.data(), i + 1);
    const std::size_t t = state.t;

    TrackingRoundTerms terms;
    terms.eta = state.schedule.at(t);
    terms.theta_hat = state.theta_hat;
    terms.comparator = comparator[i];
    terms.forecaster_loss = round_loss(state, round, state.theta_hat);
    terms.comparator_loss = round_loss(state, round, comparator[i]);
    const Vector grad =
        round.loss->gradient(state.theta_hat) + state.regularizer.subgradient(state.theta_hat);
    g_max = std::max(g_max, grad.norm());

    dmd_step(state, round, history);
    terms.theta_hat_next = state.theta_hat;
    terms.comparator_mapped = mapped(t, comparator[i], history);
    terms.comparator_next = i + 1 < comparator.size() ? comparator[i + 1] : terms.comparator_mapped;

    const auto& geom = state.geometry;
    for (const Vector* p : {&terms.theta_hat, &terms.comparator, &terms.theta_hat_next,
                            &terms.comparator_next}) {
      m_max = std::max(m_max, geom.grad_psi(*p).norm());
    }
    terms.lipschitz_loss = g_max;
    terms.lipschitz_mirror = m_max;
    terms.distortion = distortion;
    residuals.push_back(tracking_residual(geom, terms));
  }
  return residuals;
}

ForecastTrace run_forecaster(ForecasterState state, std::span<const LossRound> rounds,
                             UpdateRule rule, const ComparatorSequence* comparator,
                             std::size_t stride) {
  ForecastTrace trace;
  trace.losses.reserve(rounds.size());
  if (comparator) {
    if (comparator->size() < rounds.size()) throw InputError("run_forecaster: comparator is too short");
    trace.ledger.emplace();
  }
  const auto obs = observations_of(rounds);

  for (std::size_t i = 0; i < rounds.size(); ++i) {
    const std::size_t t = state.t;
    if (stride > 0 && i % stride == 0) trace.predictions.emplace_back(t, state.theta_hat);
    try {
      const double comparator_loss =
          comparator ? round_loss(state, rounds[i], (*comparator)[i]) : 0.0;
      double loss = 0.0;
      switch (rule) {
        case UpdateRule::kDmd:
          loss = dmd_step(state, rounds[i], History(obs.data(), i + 1)).loss;
          break;
        case UpdateRule::kComid:
          loss = comid_step(state, rounds[i]);
          break;
        case UpdateRule::kMd:
          loss = md_step(state, rounds[i]);
          break;
      }
      trace.losses.push_back(loss);
      if (comparator) trace.ledger->record(t, loss, comparator_loss);
    } catch (const std::exception& e) {
      trace.complete = false;
      trace.error = "round " + std::to_string(t) + ": " + e.what();
      break;
    }
  }

  if (comparator && trace.complete && rounds.size() >= 2) {
    const ComparatorSequence head(comparator->begin(), comparator->begin() + rounds.size());
    if (rule == UpdateRule::kDmd && state.dynamics) {
      trace.comparator_variation = variation(*state.dynamics, head, obs);
    } else {
      trace.comparator_variation = variation(IdentityDynamics(state.geometry.domain()), head, obs);
    }
  }
  return trace;
}

}  // namespace dynoc
