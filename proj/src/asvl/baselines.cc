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

#include "asvl/baselines.h"

#include <algorithm>

namespace asvl {
namespace {

double MaxOrZero(const std::vector<std::vector<std::vector<double>>>& q, int t,
                 int s) {
  if (t >= static_cast<int>(q.size())) return 0.0;
  return *std::max_element(q[t][s].begin(), q[t][s].end());
}

std::vector<double> StepValues(const AggregativeMarkovGame& game, int t, int s,
                               std::span<const int> joint) {
  std::vector<double> values;
  for (int i = 0; i < game.num_agents(); ++i) {
    values.push_back(game.action_value(t, s, i, joint[i]));
  }
  return values;
}

}  // namespace

void QLearningConfig::Validate() const {
  if (episodes < 1) throw Error("episodes must be positive");
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0) ||
      !(epsilon_end >= 0.0 && epsilon_end <= 1.0)) {
    throw Error("epsilon must lie in [0, 1]");
  }
  if (!(decay_fraction > 0.0 && decay_fraction <= 1.0)) {
    throw Error("decay_fraction must lie in (0, 1]");
  }
}

double QLearningConfig::Epsilon(int episode) const {
  const double horizon = decay_fraction * episodes;
  const double progress = (episode - 1) / horizon;
  if (progress >= 1.0) return epsilon_end;
  return epsilon_start + (epsilon_end - epsilon_start) * progress;
}

double QLearningRate(int horizon, int visit) {
  return (horizon + 1.0) / (horizon + visit);
}

int EpsilonGreedy(std::span<const double> q, double epsilon, Rng& rng) {
  const int n = static_cast<int>(q.size());
  if (rng.Uniform01() < epsilon) return rng.UniformInt(n);
  const double best = *std::max_element(q.begin(), q.end());
  int ties = 0;
  for (double v : q) ties += v == best;
  int pick = ties == 1 ? 0 : rng.UniformInt(ties);
  for (int a = 0; a < n; ++a) {
    if (q[a] == best && pick-- == 0) return a;
  }
  return n - 1;  // unreachable
}

CentralizedQ::CentralizedQ(const AggregativeMarkovGame& game,
                           QLearningConfig config)
    : game_(game), config_(config) {
  config_.Validate();
  const int T = game.horizon();
  q_.resize(T);
  visits_.resize(T);
  for (int t = 0; t < T; ++t) {
    for (int s = 0; s < game.num_states(t); ++s) {
      const std::int64_t size = game.joint_space_size(t, s);
      if (size > kMaxJointSpace) {
        throw Error("joint space too large for centralized Q-learning");
      }
      q_[t].emplace_back(size, static_cast<double>(T - t));
      visits_[t].emplace_back(size, 0);
    }
  }
}

std::vector<int> CentralizedQ::DecodeJoint(int t, int s,
                                           std::int64_t index) const {
  const int n = game_.num_agents();
  std::vector<int> joint(n);
  for (int i = n - 1; i >= 0; --i) {
    const int a = game_.num_actions(t, s, i);
    joint[i] = static_cast<int>(index % a);
    index /= a;
  }
  return joint;
}

std::vector<int> CentralizedQ::GreedyJoint(int t, int s) const {
  const auto& row = q_[t][s];
  return DecodeJoint(t, s, std::max_element(row.begin(), row.end()) - row.begin());
}

EpisodeReturns CentralizedQ::RunEpisode(int episode, Rng& env_rng, Rng& rng) {
  const int T = game_.horizon(), n = game_.num_agents();
  const double epsilon = config_.Epsilon(episode);
  EpisodeReturns out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  int s = SampleCategorical(game_.initial_distribution(), env_rng);
  for (int t = 0; t < T; ++t) {
    const int index = EpsilonGreedy(q_[t][s], epsilon, rng);
    const auto joint = DecodeJoint(t, s, index);
    const double g = Aggregate(StepValues(game_, t, s, joint), game_.aggregator());
    double mean = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = game_.Reward(t, s, i, joint[i], g);
      out.normalized[i] += r;
      out.raw[i] += game_.reward_scale().ToRaw(r);
      mean += r;
    }
    mean /= n;
    int next = -1;
    if (t + 1 < T) next = SampleCategorical(game_.Transition(t, s, joint), env_rng);
    const double target = mean + (next < 0 ? 0.0 : MaxOrZero(q_, t + 1, next));
    const double alpha = QLearningRate(T, ++visits_[t][s][index]);
    double& q = q_[t][s][index];
    q = std::clamp((1.0 - alpha) * q + alpha * target, 0.0,
                   static_cast<double>(T - t));
    s = next;
  }
  return out;
}

IndependentQ::IndependentQ(const AggregativeMarkovGame& game,
                           QLearningConfig config)
    : game_(game), config_(config) {
  config_.Validate();
  const int T = game.horizon();
  q_.resize(game.num_agents());
  visits_.resize(game.num_agents());
  for (int i = 0; i < game.num_agents(); ++i) {
    q_[i].resize(T);
    visits_[i].resize(T);
    for (int t = 0; t < T; ++t) {
      for (int s = 0; s < game.num_states(t); ++s) {
        const int a = game.num_actions(t, s, i);
        q_[i][t].emplace_back(a, static_cast<double>(T - t));
        visits_[i][t].emplace_back(a, 0);
      }
    }
  }
}

EpisodeReturns IndependentQ::RunEpisode(int episode, Rng& env_rng,
                                        std::span<Rng> rngs) {
  const int T = game_.horizon(), n = game_.num_agents();
  if (static_cast<int>(rngs.size()) != n) throw Error("one rng per agent required");
  const double epsilon = config_.Epsilon(episode);
  EpisodeReturns out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  int s = SampleCategorical(game_.initial_distribution(), env_rng);
  for (int t = 0; t < T; ++t) {
    std::vector<int> joint(n);
    for (int i = 0; i < n; ++i) joint[i] = EpsilonGreedy(q_[i][t][s], epsilon, rngs[i]);
    const double g = Aggregate(StepValues(game_, t, s, joint), game_.aggregator());
    int next = -1;
    if (t + 1 < T) next = SampleCategorical(game_.Transition(t, s, joint), env_rng);
    for (int i = 0; i < n; ++i) {
      const double r = game_.Reward(t, s, i, joint[i], g);
      out.normalized[i] += r;
      out.raw[i] += game_.reward_scale().ToRaw(r);
      const double target = r + (next < 0 ? 0.0 : MaxOrZero(q_[i], t + 1, next));
      const double alpha = QLearningRate(T, ++visits_[i][t][s][joint[i]]);
      double& q = q_[i][t][s][joint[i]];
      q = std::clamp((1.0 - alpha) * q + alpha * target, 0.0,
                     static_cast<double>(T - t));
    }
    s = next;
  }
  return out;
}

}  // namespace asvl
