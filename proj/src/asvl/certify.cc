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

#include "asvl/certify.h"

#include <algorithm>
#include <limits>
#include <string>

namespace asvl {
namespace {

void CheckCompatible(const PolicySnapshotStore& store,
                     const AggregativeMarkovGame& game) {
  if (store.horizon() != game.horizon() ||
      store.num_agents() != game.num_agents()) {
    throw Error("snapshot store does not match the game");
  }
  for (int t = 0; t < game.horizon(); ++t) {
    if (store.num_states(t) != game.num_states(t)) {
      throw Error("snapshot store does not match the game");
    }
    for (int s = 0; s < game.num_states(t); ++s) {
      for (int i = 0; i < game.num_agents(); ++i) {
        if (store.num_actions(t, s, i) != game.num_actions(t, s, i)) {
          throw Error("snapshot store does not match the game");
        }
      }
    }
  }
  if (store.num_episodes() < 1) throw Error("snapshot store is empty");
}

// Continuation over the states of t+1 as seen from a visit in `episode`.
void FillContinuation(const PolicySnapshotStore& store,
                      const StageValueTable& next, int t, int episode,
                      std::vector<double>& out) {
  out.clear();
  if (t + 1 >= store.horizon()) return;
  for (int s = 0; s < store.num_states(t + 1); ++s) {
    out.push_back(next.at(t + 1, s, store.StageAt(t + 1, s, episode)));
  }
}

enum class Recursion { kValue, kBestResponse };

StageValueTable Backward(const PolicySnapshotStore& store,
                         const AggregativeMarkovGame& game, int agent,
                         Recursion kind) {
  CheckCompatible(store, game);
  if (agent < 0 || agent >= game.num_agents()) throw Error("agent out of range");
  StageValueTable table(store);
  std::vector<double> continuation;
  for (int t = game.horizon() - 1; t >= 0; --t) {
    const double remaining = game.horizon() - t;
    for (int s = 0; s < game.num_states(t); ++s) {
      table.at(t, s, 0) = kind == Recursion::kValue ? 0.0 : remaining;
      const int n = game.num_actions(t, s, agent);
      for (int m = 1; m < table.num_stages(t, s); ++m) {
        const auto [first, last] = store.StageVisits(t, s, m - 1);
        double value_sum = 0.0;
        std::vector<double> action_sums(n, 0.0);
        for (int v = first; v < last; ++v) {
          FillContinuation(store, table, t, store.VisitEpisode(t, s, v),
                           continuation);
          const auto profile = store.VisitProfile(t, s, v);
          const auto q =
              StageActionValues(game, t, s, agent, profile, continuation);
          if (kind == Recursion::kValue) {
            for (int a = 0; a < n; ++a) value_sum += profile[agent][a] * q[a];
          } else {
            for (int a = 0; a < n; ++a) action_sums[a] += q[a];
          }
        }
        const double count = last - first;
        table.at(t, s, m) =
            kind == Recursion::kValue
                ? value_sum / count
                : *std::max_element(action_sums.begin(), action_sums.end()) /
                      count;
      }
    }
  }
  return table;
}

}  // namespace

StageValueTable::StageValueTable(const PolicySnapshotStore& store) {
  values_.resize(store.horizon());
  for (int t = 0; t < store.horizon(); ++t) {
    for (int s = 0; s < store.num_states(t); ++s) {
      values_[t].emplace_back(store.num_completed_stages(t, s) + 1, 0.0);
    }
  }
}

double StageValueTable::AtEpisode(const PolicySnapshotStore& store, int t,
                                  int s, int episode) const {
  if (t >= store.horizon()) return 0.0;
  return at(t, s, store.StageAt(t, s, episode));
}

double StageValueTable::EpisodeAverage(const PolicySnapshotStore& store,
                                       int s) const {
  const int episodes = store.num_episodes();
  double total = 0.0;
  for (int k = 1; k <= episodes; ++k) total += AtEpisode(store, 0, s, k);
  return total / episodes;
}

double StageValueTable::InitialValue(const PolicySnapshotStore& store,
                                     const AggregativeMarkovGame& game) const {
  const auto rho = game.initial_distribution();
  double total = 0.0;
  for (std::size_t s = 0; s < rho.size(); ++s) {
    if (rho[s] > 0.0) total += rho[s] * EpisodeAverage(store, static_cast<int>(s));
  }
  return total;
}

StageValueTable ExactPolicyValue(const PolicySnapshotStore& store,
                                 const AggregativeMarkovGame& game,
                                 int agent) {
  return Backward(store, game, agent, Recursion::kValue);
}

StageValueTable BestResponseUpper(const PolicySnapshotStore& store,
                                  const AggregativeMarkovGame& game,
                                  int agent) {
  return Backward(store, game, agent, Recursion::kBestResponse);
}

LowerEstimates ComputeLowerEstimates(const PolicySnapshotStore& store,
                                     const AggregativeMarkovGame& game,
                                     int agent) {
  CheckCompatible(store, game);
  if (!store.has_samples()) {
    throw Error("run was recorded without sample logging");
  }
  LowerEstimates out{StageValueTable(store), StageValueTable(store)};
  for (int t = game.horizon() - 1; t >= 0; --t) {
    for (int s = 0; s < game.num_states(t); ++s) {
      for (int m = 1; m < out.lower.num_stages(t, s); ++m) {
        const auto [first, last] = store.StageVisits(t, s, m - 1);
        const int count = last - first;
        double total = 0.0;
        for (int v = first; v < last; ++v) {
          total += store.VisitReward(t, s, v, agent);
          if (t + 1 < game.horizon()) {
            total += out.lower.AtEpisode(store, t + 1,
                                         store.VisitNextState(t, s, v),
                                         store.VisitEpisode(t, s, v));
          }
        }
        const double bonus =
            StageBonus(store.bonus_scale(), store.iota(), game.horizon(),
                       store.max_actions(agent), count);
        const double hat = total / count - bonus;
        out.lower_hat.at(t, s, m) = hat;
        out.lower.at(t, s, m) = std::max(hat, 0.0);
      }
    }
  }
  return out;
}

GapCertificate ComputeGapCertificate(const PolicySnapshotStore& store,
                                     const AggregativeMarkovGame& game,
                                     std::optional<int> initial_state) {
  CheckCompatible(store, game);
  if (initial_state && (*initial_state < 0 ||
                        *initial_state >= game.num_states(0))) {
    throw Error("initial state out of range");
  }
  GapCertificate cert;
  cert.episodes = store.num_episodes();
  cert.approximate = store.options().compact;
  cert.gap = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < game.num_agents(); ++i) {
    const auto value = ExactPolicyValue(store, game, i);
    const auto upper = BestResponseUpper(store, game, i);
    AgentCertificate a;
    a.agent = i;
    if (initial_state) {
      a.value = value.EpisodeAverage(store, *initial_state);
      a.br_upper = upper.EpisodeAverage(store, *initial_state);
    } else {
      a.value = value.InitialValue(store, game);
      a.br_upper = upper.InitialValue(store, game);
    }
    a.gap = a.br_upper - a.value;
    cert.gap = std::max(cert.gap, a.gap);
    cert.agents.push_back(a);
  }
  return cert;
}

SandwichReport CheckConfidenceSandwich(const PolicySnapshotStore& store,
                                       const AggregativeMarkovGame& game,
                                       int initial_state) {
  constexpr double kSlack = 1e-12;
  SandwichReport report;
  for (int i = 0; i < game.num_agents(); ++i) {
    const auto value = ExactPolicyValue(store, game, i);
    const auto upper = BestResponseUpper(store, game, i);
    const auto lower = ComputeLowerEstimates(store, game, i);
    for (int k = 1; k <= store.num_episodes(); ++k) {
      const int m = store.StageAt(0, initial_state, k);
      ++report.checks;
      if (store.UpperValueAtEpisode(0, initial_state, i, k) + kSlack >=
          upper.at(0, initial_state, m)) {
        ++report.upper_holds;
      }
      if (value.at(0, initial_state, m) + kSlack >=
          lower.lower.at(0, initial_state, m)) {
        ++report.lower_holds;
      }
    }
  }
  return report;
}

CertifiedPolicy::CertifiedPolicy(const PolicySnapshotStore& store,
                                 std::uint64_t shared_seed)
    : store_(store), rng_(shared_seed) {
  if (store.num_episodes() < 1) throw Error("snapshot store is empty");
}

EpisodeTrace CertifiedPolicy::SampleTrajectory(const AggregativeMarkovGame& game,
                                               Rng& env_rng) {
  CheckCompatible(store_, game);
  EpisodeTrace trace;
  int k = 1 + rng_.UniformInt(store_.num_episodes());
  trace.sampled_episode = k;
  int s = SampleCategorical(game.initial_distribution(), env_rng);
  const int n = game.num_agents();
  for (int t = 0; t < game.horizon(); ++t) {
    trace.states.push_back(s);
    std::vector<int> joint(n);
    const int stage = store_.StageAt(t, s, k);
    if (stage == 0) {
      for (int i = 0; i < n; ++i) {
        joint[i] = rng_.UniformInt(game.num_actions(t, s, i));
      }
      trace.fallback.push_back(true);
    } else {
      const auto [first, last] = store_.StageVisits(t, s, stage - 1);
      const int visit = first + rng_.UniformInt(last - first);
      k = store_.VisitEpisode(t, s, visit);
      for (int i = 0; i < n; ++i) {
        joint[i] = SampleCategorical(store_.VisitPolicy(t, s, visit, i), rng_);
      }
      trace.fallback.push_back(false);
    }
    std::vector<double> values;
    for (int i = 0; i < n; ++i) values.push_back(game.action_value(t, s, i, joint[i]));
    const double g = Aggregate(values, game.aggregator());
    std::vector<double> rewards;
    for (int i = 0; i < n; ++i) rewards.push_back(game.Reward(t, s, i, joint[i], g));
    trace.actions.push_back(joint);
    trace.rewards.push_back(rewards);
    if (t + 1 < game.horizon()) {
      s = SampleCategorical(game.Transition(t, s, joint), env_rng);
    }
  }
  return trace;
}

}  // namespace asvl
