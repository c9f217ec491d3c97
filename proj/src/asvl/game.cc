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

#include "asvl/game.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace asvl {
namespace {

constexpr double kDistributionTolerance = 1e-12;
constexpr double kRewardTolerance = 1e-9;

bool SameAggregate(double a, double b) {
  return std::abs(a - b) <=
         1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Sorts by support value and merges entries that are numerically equal.
AggregateDistribution Canonicalize(std::vector<std::pair<double, double>> mass) {
  std::sort(mass.begin(), mass.end());
  AggregateDistribution out;
  for (const auto& [value, prob] : mass) {
    if (!out.support.empty() && SameAggregate(out.support.back(), value)) {
      out.probs.back() += prob;
    } else {
      out.support.push_back(value);
      out.probs.push_back(prob);
    }
  }
  return out;
}

// Distribution of the sum of action values over all agents other than
// `skip_agent` (pass -1 to include everyone).
AggregateDistribution SumDistribution(const AggregativeMarkovGame& game, int t,
                                      int s, int skip_agent,
                                      ProfileView profile) {
  AggregateDistribution dist{{0.0}, {1.0}};
  for (int j = 0; j < game.num_agents(); ++j) {
    if (j == skip_agent) continue;
    const auto values = game.action_values(t, s, j);
    const PolicyView policy = profile[j];
    std::vector<std::pair<double, double>> next;
    next.reserve(dist.support.size() * values.size());
    for (std::size_t u = 0; u < dist.support.size(); ++u) {
      for (std::size_t a = 0; a < values.size(); ++a) {
        if (policy[a] == 0.0) continue;
        next.emplace_back(dist.support[u] + values[a],
                          dist.probs[u] * policy[a]);
      }
    }
    dist = Canonicalize(std::move(next));
  }
  return dist;
}

void CheckDistribution(std::span<const double> probs, std::size_t size,
                       const std::string& what) {
  if (probs.size() != size) {
    throw Error(what + ": expected " + std::to_string(size) +
                " probabilities, got " + std::to_string(probs.size()));
  }
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw Error(what + ": negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > kDistributionTolerance) {
    throw Error(what + ": probabilities sum to " + std::to_string(total));
  }
}

std::vector<std::vector<double>> UniformProfile(
    const AggregativeMarkovGame& game, int t, int s) {
  std::vector<std::vector<double>> out;
  for (int j = 0; j < game.num_agents(); ++j) {
    const int n = game.num_actions(t, s, j);
    out.emplace_back(n, 1.0 / n);
  }
  return out;
}

std::vector<PolicyView> Views(const std::vector<std::vector<double>>& p) {
  return {p.begin(), p.end()};
}

void CheckIndex(int value, int bound, const char* what) {
  if (value < 0 || value >= bound) {
    throw Error(std::string(what) + " index " + std::to_string(value) +
                " out of range [0, " + std::to_string(bound) + ")");
  }
}

}  // namespace

std::string AggregatorName(Aggregator aggregator) {
  return aggregator == Aggregator::kSum ? "sum" : "mean";
}

Aggregator ParseAggregator(const std::string& name) {
  if (name == "sum" || name == "SUM") return Aggregator::kSum;
  if (name == "mean" || name == "MEAN") return Aggregator::kMean;
  throw Error("unknown aggregator '" + name + "'");
}

double Aggregate(std::span<const double> values, Aggregator aggregator) {
  if (values.empty()) throw Error("empty aggregate");
  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  return aggregator == Aggregator::kSum
             ? sum
             : sum / static_cast<double>(values.size());
}

double AggregateDistribution::TotalMass() const {
  return std::accumulate(probs.begin(), probs.end(), 0.0);
}

void ValidatePolicy(PolicyView policy, int num_actions, double tolerance) {
  if (static_cast<int>(policy.size()) != num_actions) {
    throw Error("policy has " + std::to_string(policy.size()) +
                " entries, expected " + std::to_string(num_actions));
  }
  double total = 0.0;
  for (double p : policy) {
    if (!(p >= 0.0)) throw Error("policy has a negative entry");
    total += p;
  }
  if (std::abs(total - 1.0) > tolerance) {
    throw Error("policy not normalized (sum " + std::to_string(total) + ")");
  }
}

AggregativeMarkovGame::AggregativeMarkovGame(Definition definition)
    : def_(std::move(definition)) {
  aggregate_dependent_ = static_cast<bool>(def_.aggregate_transition);
  Validate();
}

void AggregativeMarkovGame::Validate() const {
  if (def_.horizon < 1) throw Error("horizon must be positive");
  if (def_.num_agents < 1) throw Error("num_agents must be positive");
  if (static_cast<int>(def_.num_states.size()) != def_.horizon) {
    throw Error("num_states must list one entry per step");
  }
  if (static_cast<int>(def_.action_values.size()) != def_.horizon) {
    throw Error("action_values must list one entry per step");
  }
  if (!def_.raw_reward) throw Error("reward function missing");
  if (!(def_.reward_scale.scale > 0.0)) {
    throw Error("reward scale must be positive");
  }
  if (def_.horizon > 1 && !def_.aggregate_transition &&
      !def_.joint_transition) {
    throw Error("transition function missing");
  }
  for (int t = 0; t < def_.horizon; ++t) {
    if (def_.num_states[t] < 1) throw Error("every step needs a state");
    if (static_cast<int>(def_.action_values[t].size()) != def_.num_states[t]) {
      throw Error("action_values[" + std::to_string(t) +
                  "] must cover every state");
    }
    for (int s = 0; s < def_.num_states[t]; ++s) {
      if (static_cast<int>(def_.action_values[t][s].size()) !=
          def_.num_agents) {
        throw Error("action sets must be given for every agent");
      }
      for (const auto& values : def_.action_values[t][s]) {
        if (values.empty()) throw Error("empty action set");
      }
    }
  }
  CheckDistribution(def_.initial_distribution, def_.num_states[0],
                    "initial distribution");

  for (int t = 0; t < def_.horizon; ++t) {
    for (int s = 0; s < def_.num_states[t]; ++s) {
      const auto uniform = UniformProfile(*this, t, s);
      const auto views = Views(uniform);
      const auto global = SumDistribution(*this, t, s, -1, views);
      for (double total : global.support) {
        const double g = def_.aggregator == Aggregator::kSum
                             ? total
                             : total / def_.num_agents;
        if (def_.require_positive_aggregates && !(g > 0.0)) {
          throw Error("aggregate must be positive");
        }
        if (aggregate_dependent_ && t + 1 < def_.horizon) {
          CheckDistribution(TransitionByAggregate(t, s, g),
                            def_.num_states[t + 1], "transition");
        }
      }
      for (int i = 0; i < def_.num_agents; ++i) {
        const auto others = SumDistribution(*this, t, s, i, views);
        for (int a = 0; a < num_actions(t, s, i); ++a) {
          for (double rest : others.support) {
            const double g = CombineAggregate(action_value(t, s, i, a), rest);
            const double r = def_.reward_scale.ToNormalized(
                def_.raw_reward(t, s, i, a, g));
            if (!(r >= -kRewardTolerance && r <= 1.0 + kRewardTolerance)) {
              throw Error("normalized reward " + std::to_string(r) +
                          " outside [0, 1]");
            }
          }
        }
      }
      if (!aggregate_dependent_ && t + 1 < def_.horizon &&
          joint_space_size(t, s) <= kMaxJointSpace) {
        std::vector<int> joint(def_.num_agents, 0);
        while (true) {
          CheckDistribution(def_.joint_transition(t, s, joint),
                            def_.num_states[t + 1], "transition");
          int j = 0;
          for (; j < def_.num_agents; ++j) {
            if (++joint[j] < num_actions(t, s, j)) break;
            joint[j] = 0;
          }
          if (j == def_.num_agents) break;
        }
      }
    }
  }
}

int AggregativeMarkovGame::num_states(int t) const {
  CheckIndex(t, def_.horizon, "step");
  return def_.num_states[t];
}

int AggregativeMarkovGame::max_states() const {
  return *std::max_element(def_.num_states.begin(), def_.num_states.end());
}

int AggregativeMarkovGame::num_actions(int t, int s, int agent) const {
  return static_cast<int>(def_.action_values[t][s][agent].size());
}

int AggregativeMarkovGame::max_actions(int agent) const {
  int best = 0;
  for (int t = 0; t < def_.horizon; ++t) {
    for (int s = 0; s < def_.num_states[t]; ++s) {
      best = std::max(best, num_actions(t, s, agent));
    }
  }
  return best;
}

int AggregativeMarkovGame::max_actions() const {
  int best = 0;
  for (int i = 0; i < def_.num_agents; ++i) best = std::max(best, max_actions(i));
  return best;
}

std::int64_t AggregativeMarkovGame::joint_space_size(int t, int s) const {
  std::int64_t size = 1;
  for (int j = 0; j < def_.num_agents; ++j) {
    size *= num_actions(t, s, j);
    if (size > kMaxJointSpace) return kMaxJointSpace + 1;
  }
  return size;
}

std::span<const double> AggregativeMarkovGame::action_values(int t, int s,
                                                             int agent) const {
  CheckIndex(t, def_.horizon, "step");
  CheckIndex(s, def_.num_states[t], "state");
  CheckIndex(agent, def_.num_agents, "agent");
  return def_.action_values[t][s][agent];
}

double AggregativeMarkovGame::action_value(int t, int s, int agent,
                                           int action) const {
  const auto values = action_values(t, s, agent);
  CheckIndex(action, static_cast<int>(values.size()), "action");
  return values[action];
}

double AggregativeMarkovGame::CombineAggregate(double own_value,
                                               double others_sum) const {
  const double total = own_value + others_sum;
  return def_.aggregator == Aggregator::kSum ? total
                                             : total / def_.num_agents;
}

double AggregativeMarkovGame::RawReward(int t, int s, int agent, int action,
                                        double aggregate) const {
  return def_.raw_reward(t, s, agent, action, aggregate);
}

double AggregativeMarkovGame::Reward(int t, int s, int agent, int action,
                                     double aggregate) const {
  const double r =
      def_.reward_scale.ToNormalized(RawReward(t, s, agent, action, aggregate));
  return std::clamp(r, 0.0, 1.0);
}

std::vector<double> AggregativeMarkovGame::TransitionByAggregate(
    int t, int s, double aggregate) const {
  if (!aggregate_dependent_) {
    throw Error("transition is not aggregate-dependent");
  }
  return def_.aggregate_transition(t, s, aggregate);
}

std::vector<double> AggregativeMarkovGame::Transition(
    int t, int s, std::span<const int> joint_action) const {
  if (aggregate_dependent_) {
    std::vector<double> values;
    values.reserve(joint_action.size());
    for (int j = 0; j < def_.num_agents; ++j) {
      values.push_back(action_value(t, s, j, joint_action[j]));
    }
    return def_.aggregate_transition(t, s, Aggregate(values, def_.aggregator));
  }
  return def_.joint_transition(t, s, joint_action);
}

std::pair<double, double> AggregativeMarkovGame::AggregateRange() const {
  double lo = INFINITY;
  double hi = -INFINITY;
  for (int t = 0; t < def_.horizon; ++t) {
    for (int s = 0; s < def_.num_states[t]; ++s) {
      double min_total = 0.0;
      double max_total = 0.0;
      for (int j = 0; j < def_.num_agents; ++j) {
        const auto v = action_values(t, s, j);
        min_total += *std::min_element(v.begin(), v.end());
        max_total += *std::max_element(v.begin(), v.end());
      }
      lo = std::min(lo, CombineAggregate(0.0, min_total));
      hi = std::max(hi, CombineAggregate(0.0, max_total));
    }
  }
  return {lo, hi};
}

AggregateDistribution OpponentSumDistribution(const AggregativeMarkovGame& game,
                                              int t, int s, int agent,
                                              ProfileView profile) {
  if (static_cast<int>(profile.size()) != game.num_agents()) {
    throw Error("profile must hold one policy per agent");
  }
  for (int j = 0; j < game.num_agents(); ++j) {
    if (j == agent) continue;
    ValidatePolicy(profile[j], game.num_actions(t, s, j), 1e-9);
  }
  return SumDistribution(game, t, s, agent, profile);
}

AggregateDistribution OpponentAggregateDistribution(
    const AggregativeMarkovGame& game, int t, int s, int agent,
    ProfileView profile) {
  if (game.num_agents() < 2) throw Error("empty aggregate");
  auto dist = OpponentSumDistribution(game, t, s, agent, profile);
  if (game.aggregator() == Aggregator::kMean) {
    const double n = game.num_agents() - 1;
    for (double& g : dist.support) g /= n;
  }
  return dist;
}

std::vector<double> StageActionValues(const AggregativeMarkovGame& game, int t,
                                      int s, int agent, ProfileView profile,
                                      std::span<const double> continuation) {
  const int num_actions = game.num_actions(t, s, agent);
  const bool last_step = t + 1 == game.horizon();
  if (!last_step &&
      static_cast<int>(continuation.size()) != game.num_states(t + 1)) {
    throw Error("continuation must cover every next-step state");
  }
  std::vector<double> values(num_actions, 0.0);

  if (last_step || game.aggregate_dependent()) {
    const auto others = OpponentSumDistribution(game, t, s, agent, profile);
    for (int a = 0; a < num_actions; ++a) {
      const double own = game.action_value(t, s, agent, a);
      double total = 0.0;
      for (std::size_t u = 0; u < others.support.size(); ++u) {
        const double g = game.CombineAggregate(own, others.support[u]);
        double q = game.Reward(t, s, agent, a, g);
        if (!last_step) {
          const auto next = game.TransitionByAggregate(t, s, g);
          for (std::size_t n = 0; n < next.size(); ++n) {
            q += next[n] * continuation[n];
          }
        }
        total += others.probs[u] * q;
      }
      values[a] = total;
    }
    return values;
  }

  if (game.joint_space_size(t, s) > kMaxJointSpace) {
    throw Error("joint space too large; transition not aggregate-dependent");
  }
  for (int j = 0; j < game.num_agents(); ++j) {
    if (j == agent) continue;
    ValidatePolicy(profile[j], game.num_actions(t, s, j), 1e-9);
  }
  // Enumerate opponents' joint actions with the own action fixed.
  std::vector<int> joint(game.num_agents(), 0);
  for (int a = 0; a < num_actions; ++a) {
    std::fill(joint.begin(), joint.end(), 0);
    joint[agent] = a;
    double total = 0.0;
    while (true) {
      double prob = 1.0;
      double others_sum = 0.0;
      for (int j = 0; j < game.num_agents(); ++j) {
        if (j == agent) continue;
        prob *= profile[j][joint[j]];
        others_sum += game.action_value(t, s, j, joint[j]);
      }
      if (prob > 0.0) {
        const double g = game.CombineAggregate(
            game.action_value(t, s, agent, a), others_sum);
        double q = game.Reward(t, s, agent, a, g);
        const auto next = game.Transition(t, s, joint);
        for (std::size_t n = 0; n < next.size(); ++n) {
          q += next[n] * continuation[n];
        }
        total += prob * q;
      }
      int j = 0;
      for (; j < game.num_agents(); ++j) {
        if (j == agent) continue;
        if (++joint[j] < game.num_actions(t, s, j)) break;
        joint[j] = 0;
      }
      if (j == game.num_agents()) break;
    }
    values[a] = total;
  }
  return values;
}

double ExpectedStageValue(const AggregativeMarkovGame& game, int t, int s,
                          int agent, ProfileView profile,
                          std::span<const double> continuation) {
  ValidatePolicy(profile[agent], game.num_actions(t, s, agent), 1e-9);
  const auto values =
      StageActionValues(game, t, s, agent, profile, continuation);
  double total = 0.0;
  for (std::size_t a = 0; a < values.size(); ++a) {
    total += profile[agent][a] * values[a];
  }
  return total;
}

}  // namespace asvl
