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

#ifndef ASVL_BASELINES_H_
#define ASVL_BASELINES_H_

#include <cstdint>
#include <span>
#include <vector>

#include "asvl/game.h"
#include "asvl/rng.h"

namespace asvl {

// Epsilon-greedy tabular Q-learning settings shared by both baselines.
struct QLearningConfig {
  int episodes = 1;              // K; sets the exploration schedule
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double decay_fraction = 0.5;   // epsilon reaches epsilon_end here

  void Validate() const;
  // Linear decay over the first decay_fraction * K episodes (1-based).
  double Epsilon(int episode) const;
};

// Learning rate (T + 1) / (T + n) for the n-th visit.
double QLearningRate(int horizon, int visit);

// Epsilon-greedy pick with a uniformly random tie-break among maximizers.
int EpsilonGreedy(std::span<const double> q, double epsilon, Rng& rng);

// Outcome of one episode.
struct EpisodeReturns {
  std::vector<double> raw;         // per agent, raw environment payoff
  std::vector<double> normalized;  // per agent, in [0, T]
};

// One controller picks joint actions to maximize the agents' total reward.
// Q is kept in units of the mean normalized reward, so entries lie in
// [0, T - t] like a single-agent table.
class CentralizedQ {
 public:
  CentralizedQ(const AggregativeMarkovGame& game, QLearningConfig config);

  EpisodeReturns RunEpisode(int episode, Rng& env_rng, Rng& rng);

  std::span<const double> q(int t, int s) const { return q_[t][s]; }
  std::vector<int> DecodeJoint(int t, int s, std::int64_t index) const;
  // Greedy joint action (lowest index among maximizers).
  std::vector<int> GreedyJoint(int t, int s) const;

 private:
  const AggregativeMarkovGame& game_;
  QLearningConfig config_;
  std::vector<std::vector<std::vector<double>>> q_;
  std::vector<std::vector<std::vector<int>>> visits_;
};

// Every agent runs single-agent Q-learning on (t, s, own action), treating
// the others as part of the environment.
class IndependentQ {
 public:
  IndependentQ(const AggregativeMarkovGame& game, QLearningConfig config);

  // rngs[i] drives agent i's exploration.
  EpisodeReturns RunEpisode(int episode, Rng& env_rng, std::span<Rng> rngs);

  std::span<const double> q(int agent, int t, int s) const {
    return q_[agent][t][s];
  }

 private:
  const AggregativeMarkovGame& game_;
  QLearningConfig config_;
  std::vector<std::vector<std::vector<std::vector<double>>>> q_;
  std::vector<std::vector<std::vector<std::vector<int>>>> visits_;
};

}  // namespace asvl

#endif  // ASVL_BASELINES_H_
