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

#ifndef ASVL_GAME_H_
#define ASVL_GAME_H_

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace asvl {

// All recoverable failures in the library are reported with this type. The C
// API maps it onto error codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem failures (unreadable input, unwritable output).
class IoError : public Error {
 public:
  using Error::Error;
};

// Maximum size of a joint action space that exact enumeration will visit.
inline constexpr std::int64_t kMaxJointSpace = 1'000'000;

enum class Aggregator { kSum, kMean };

std::string AggregatorName(Aggregator aggregator);
Aggregator ParseAggregator(const std::string& name);

// Reduces a nonempty multiset of action values.
double Aggregate(std::span<const double> values, Aggregator aggregator);

// Finite distribution over aggregate values. Support is sorted and distinct.
struct AggregateDistribution {
  std::vector<double> support;
  std::vector<double> probs;

  double TotalMass() const;
};

using PolicyView = std::span<const double>;
using ProfileView = std::span<const PolicyView>;

// Affine map between environment payoffs and normalized rewards in [0, 1]:
// raw = offset + scale * normalized.
struct RewardScale {
  double offset = 0.0;
  double scale = 1.0;

  double ToRaw(double normalized) const { return offset + scale * normalized; }
  double ToNormalized(double raw) const { return (raw - offset) / scale; }
};

// Finite-horizon Markov game whose rewards depend on an agent's own action
// and the aggregate of action values. Steps t and states s are 0-based.
//
// Rewards are supplied as functions of the GLOBAL aggregate sigma(a) of all
// agents' action values. For SUM and MEAN this carries the same information
// as sigma(a_{-i}) once the agent's own action is fixed.
class AggregativeMarkovGame {
 public:
  // Raw environment payoff for `agent` playing action index `action`.
  using RewardFn = std::function<double(int t, int s, int agent, int action,
                                        double aggregate)>;
  // Distribution over the states of step t+1.
  using AggregateTransitionFn =
      std::function<std::vector<double>(int t, int s, double aggregate)>;
  using JointTransitionFn = std::function<std::vector<double>(
      int t, int s, std::span<const int> joint_action)>;

  struct Definition {
    std::string name = "game";
    int horizon = 1;
    int num_agents = 1;
    std::vector<int> num_states;  // per step
    // action_values[t][s][agent] lists the numeric value of each action.
    std::vector<std::vector<std::vector<std::vector<double>>>> action_values;
    Aggregator aggregator = Aggregator::kSum;
    RewardFn raw_reward;
    RewardScale reward_scale;
    // Exactly one of the two transition forms must be set for t < T-1.
    AggregateTransitionFn aggregate_transition;
    JointTransitionFn joint_transition;
    std::vector<double> initial_distribution;
    // Demands sigma(a) > 0 everywhere; needed when fluctuation estimators
    // consume the aggregate stream.
    bool require_positive_aggregates = false;
  };

  explicit AggregativeMarkovGame(Definition definition);

  const std::string& name() const { return def_.name; }
  int horizon() const { return def_.horizon; }
  int num_agents() const { return def_.num_agents; }
  int num_states(int t) const;
  int max_states() const;
  int num_actions(int t, int s, int agent) const;
  // max over (t, s) of the action count of `agent`.
  int max_actions(int agent) const;
  int max_actions() const;
  std::int64_t joint_space_size(int t, int s) const;
  std::span<const double> action_values(int t, int s, int agent) const;
  double action_value(int t, int s, int agent, int action) const;
  Aggregator aggregator() const { return def_.aggregator; }
  bool aggregate_dependent() const { return aggregate_dependent_; }
  const RewardScale& reward_scale() const { return def_.reward_scale; }
  std::span<const double> initial_distribution() const {
    return def_.initial_distribution;
  }
  bool requires_positive_aggregates() const {
    return def_.require_positive_aggregates;
  }

  // Global aggregate given the own value and the SUM of the others' values.
  double CombineAggregate(double own_value, double others_sum) const;

  double RawReward(int t, int s, int agent, int action,
                   double aggregate) const;
  double Reward(int t, int s, int agent, int action, double aggregate) const;

  // Next-state distribution; only valid for t < T-1.
  std::vector<double> TransitionByAggregate(int t, int s,
                                            double aggregate) const;
  std::vector<double> Transition(int t, int s,
                                 std::span<const int> joint_action) const;

  // Smallest and largest global aggregate reachable at any (t, s).
  std::pair<double, double> AggregateRange() const;

 private:
  void Validate() const;

  Definition def_;
  bool aggregate_dependent_ = false;
};

// Exact distribution of the SUM of the action values of every agent except
// `agent`, under independent sampling from `profile`. Point mass at 0 when
// there are no other agents.
AggregateDistribution OpponentSumDistribution(const AggregativeMarkovGame& game,
                                              int t, int s, int agent,
                                              ProfileView profile);

// Exact distribution of sigma(a_{-i}) for the game's aggregator.
AggregateDistribution OpponentAggregateDistribution(
    const AggregativeMarkovGame& game, int t, int s, int agent,
    ProfileView profile);

// For each own action a_i: E_{a_{-i}}[ r_i(t, s, a_i, .) + sum_s' p(s') V(s') ].
// `continuation` covers the states of step t+1 and is ignored at t = T-1.
// profile[agent] is not read.
std::vector<double> StageActionValues(const AggregativeMarkovGame& game, int t,
                                      int s, int agent, ProfileView profile,
                                      std::span<const double> continuation);

// E_{a ~ x_j pi_j}[ r_i + P_t V ](s).
double ExpectedStageValue(const AggregativeMarkovGame& game, int t, int s,
                          int agent, ProfileView profile,
                          std::span<const double> continuation);

// Checks that `policy` is a distribution over `num_actions` entries.
void ValidatePolicy(PolicyView policy, int num_actions, double tolerance);

}  // namespace asvl

#endif  // ASVL_GAME_H_
