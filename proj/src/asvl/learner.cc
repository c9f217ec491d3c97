// Copyright 2026 The ASVL Authors. All rights reserved.
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

#include "asvl/learner.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace asvl {

void LearnerConfig::Validate(int horizon) const {
  if (!(iota > 0.0)) throw Error("iota must be positive");
  if (!(bonus_scale > 0.0)) throw Error("bonus_scale must be positive");
  fluctuation.Validate(horizon);
}

double DefaultIota(const AggregativeMarkovGame& game, int episodes, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw Error("p must lie in (0, 1]");
  if (episodes < 1) throw Error("episodes must be positive");
  return std::log(2.0 * game.num_agents() * game.max_states() *
                  game.max_actions() * static_cast<double>(episodes) *
                  game.horizon() / p);
}

double StageBonus(double bonus_scale, double iota, int horizon,
                  int num_actions, int count) {
  const double t = horizon;
  return bonus_scale * std::sqrt(t * t * num_actions * iota / count);
}

int NextStageLength(double lambda, int horizon, int length) {
  // (T+1) L / T avoids the rounding of (1 + 1/T) for integral products.
  const double grown = lambda * ((horizon + 1.0) * length / horizon);
  return std::max(static_cast<int>(std::floor(grown)), 1);
}

VLearner::VLearner(const AggregativeMarkovGame& game, int agent,
                   LearnerConfig config)
    : agent_(agent),
      horizon_(game.horizon()),
      max_actions_(game.max_actions(agent)),
      config_(config) {
  config_.Validate(horizon_);
  states_.resize(horizon_);
  for (int t = 0; t < horizon_; ++t) {
    const double remaining = horizon_ - t;
    for (int s = 0; s < game.num_states(t); ++s) {
      PerStateLearnerState st(game.num_actions(t, s, agent));
      st.stage_length = horizon_;
      st.vhat = remaining;
      st.vbar = remaining;
      states_[t].push_back(std::move(st));
    }
  }
}

const PerStateLearnerState& VLearner::state(int t, int s) const {
  if (t < 0 || t >= horizon_ || s < 0 ||
      s >= static_cast<int>(states_[t].size())) {
    throw Error("no learner state for (t=" + std::to_string(t) +
                ", s=" + std::to_string(s) + ")");
  }
  return states_[t][s];
}

PerStateLearnerState& VLearner::mutable_state(int t, int s) {
  return const_cast<PerStateLearnerState&>(std::as_const(*this).state(t, s));
}

double VLearner::UpperValue(int t, int s) const {
  if (t >= horizon_) return 0.0;
  return state(t, s).vbar;
}

int VLearner::clamped_losses() const {
  int total = 0;
  for (const auto& row : states_) {
    for (const auto& st : row) total += st.bandit.clamped_losses();
  }
  return total;
}

int VLearner::Step(int t, int s, Rng& rng) {
  PerStateLearnerState& st = mutable_state(t, s);
  if (st.pending) throw Error("Step() called twice without Observe()");
  ++st.visit_count;
  st.eta = 2.0 * std::sqrt(1.0 / st.visit_count);
  st.pending = true;
  return st.bandit.Sample(rng);
}

std::optional<StageEnd> VLearner::Observe(int t, int s, int action,
                                          double reward, int next_state,
                                          double aggregate) {
  PerStateLearnerState& st = mutable_state(t, s);
  if (!st.pending) throw Error("Observe() without a preceding Step()");
  if (config_.fluctuation.mode != FluctuationMode::kNone && !(aggregate > 0.0)) {
    throw Error("aggregate must be positive");
  }
  st.pending = false;
  st.aggregates.push_back(aggregate);
  const double next_value = UpperValue(t + 1, next_state);
  st.reward_acc += reward;
  st.value_acc += next_value;

  const double remaining = horizon_ - t;
  const double loss = (remaining - (reward + next_value)) / horizon_;
  st.bandit.LossUpdate(action, loss, remaining / horizon_);
  st.bandit.RecomputePolicy(st.eta);

  if (st.visit_count == st.stage_length) return EndStage(t, s);
  return std::nullopt;
}

StageEnd VLearner::EndStage(int t, int s) {
  PerStateLearnerState& st = mutable_state(t, s);
  const int count = st.visit_count;
  StageEnd end;
  end.t = t;
  end.s = s;
  end.stage_index = st.stage_index;
  end.length = st.stage_length;

  const double bonus = StageBonus(config_.bonus_scale, config_.iota, horizon_,
                                  max_actions_, count);
  st.vhat = st.reward_acc / count + st.value_acc / count + bonus;
  st.vbar = std::min(st.vhat, static_cast<double>(horizon_ - t));

  end.lambda = FluctuationCoefficient(config_.fluctuation, st.aggregates,
                                      horizon_);
  st.stage_length = NextStageLength(end.lambda, horizon_, st.stage_length);

  st.aggregates.clear();
  st.visit_count = 0;
  st.reward_acc = 0.0;
  st.value_acc = 0.0;
  st.bandit.Reset();
  ++st.stage_index;

  end.next_length = st.stage_length;
  end.vhat = st.vhat;
  end.vbar = st.vbar;
  return end;
}

}  // namespace asvl
