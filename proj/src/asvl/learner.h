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

#ifndef ASVL_LEARNER_H_
#define ASVL_LEARNER_H_

#include <optional>
#include <vector>

#include "asvl/fluctuation.h"
#include "asvl/game.h"
#include "asvl/rng.h"
#include "asvl/tsallis.h"

namespace asvl {

struct LearnerConfig {
  // Log term of the exploration bonus.
  double iota = 1.0;
  double bonus_scale = 4.0;
  FluctuationConfig fluctuation;

  void Validate(int horizon) const;
};

// log(2 N S A_max K T / p).
double DefaultIota(const AggregativeMarkovGame& game, int episodes, double p);

// max(floor(lambda (1 + 1/T) L), 1).
int NextStageLength(double lambda, int horizon, int length);

// bonus_scale * sqrt(T^2 A iota / count).
double StageBonus(double bonus_scale, double iota, int horizon,
                  int num_actions, int count);

// Bookkeeping for one (step, state) pair of one agent.
struct PerStateLearnerState {
  int visit_count = 0;
  int stage_length = 1;
  double reward_acc = 0.0;
  double value_acc = 0.0;
  std::vector<double> aggregates;
  TsallisInfBandit bandit;
  double vhat = 0.0;  // unclipped, kept for diagnostics
  double vbar = 0.0;
  int stage_index = 0;  // completed stages
  double eta = 2.0;
  bool pending = false;  // Step() called, Observe() outstanding

  explicit PerStateLearnerState(int num_actions) : bandit(num_actions) {}
};

// Emitted when a stage of (t, s) completes.
struct StageEnd {
  int t = 0;
  int s = 0;
  int stage_index = 0;  // index of the stage that just completed
  int length = 0;       // its length
  double lambda = 1.0;
  int next_length = 0;
  double vhat = 0.0;
  double vbar = 0.0;
};

// One agent's adaptive stage-based V-learner. It only ever sees the common
// state, its own actions and rewards, and the broadcast aggregate.
class VLearner {
 public:
  VLearner(const AggregativeMarkovGame& game, int agent, LearnerConfig config);

  int agent() const { return agent_; }
  int horizon() const { return horizon_; }
  // max over (t, s) of this agent's action count.
  int max_actions() const { return max_actions_; }
  const LearnerConfig& config() const { return config_; }

  // Counts the visit and draws an action from the current stage policy.
  int Step(int t, int s, Rng& rng);

  // Feeds back the normalized reward, the next state (ignored at t = T-1) and
  // the aggregate; closes the stage when its length is reached.
  std::optional<StageEnd> Observe(int t, int s, int action, double reward,
                                  int next_state, double aggregate);

  const PerStateLearnerState& state(int t, int s) const;
  // Optimistic value at step t; identically 0 past the horizon.
  double UpperValue(int t, int s) const;
  // Policy currently used to act at (t, s).
  PolicyView Policy(int t, int s) const { return state(t, s).bandit.policy(); }
  int clamped_losses() const;

 private:
  PerStateLearnerState& mutable_state(int t, int s);
  StageEnd EndStage(int t, int s);

  int agent_;
  int horizon_;
  int max_actions_;
  LearnerConfig config_;
  std::vector<std::vector<PerStateLearnerState>> states_;
};

}  // namespace asvl

#endif  // ASVL_LEARNER_H_
