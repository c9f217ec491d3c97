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

// Slow, independent reference computations used to check the library. They
// enumerate joint actions directly and never touch the convolution or the
// stage-memoized recursions.

#ifndef ASVL_TESTS_ORACLES_H_
#define ASVL_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <tuple>
#include <vector>

#include "asvl/game.h"
#include "asvl/snapshot_store.h"

namespace asvl::oracle {

// Calls f(joint, probability) for every joint action with positive mass.
// Agents listed in `fixed` (agent -> action) are pinned.
inline void ForEachJoint(const AggregativeMarkovGame& game, int t, int s,
                         const std::vector<std::vector<double>>& profile,
                         const std::map<int, int>& fixed,
                         const std::function<void(const std::vector<int>&, double)>& f) {
  const int n = game.num_agents();
  std::vector<int> joint(n, 0);
  std::function<void(int, double)> rec = [&](int j, double p) {
    if (j == n) {
      f(joint, p);
      return;
    }
    if (auto it = fixed.find(j); it != fixed.end()) {
      joint[j] = it->second;
      rec(j + 1, p);
      return;
    }
    for (int a = 0; a < game.num_actions(t, s, j); ++a) {
      if (profile[j][a] == 0.0) continue;
      joint[j] = a;
      rec(j + 1, p * profile[j][a]);
    }
  };
  rec(0, 1.0);
}

inline double JointAggregate(const AggregativeMarkovGame& game, int t, int s,
                             const std::vector<int>& joint) {
  double total = 0.0;
  for (int j = 0; j < game.num_agents(); ++j) total += game.action_value(t, s, j, joint[j]);
  return game.aggregator() == Aggregator::kSum ? total : total / game.num_agents();
}

// E[r_i + sum_s' p V(s')] for each own action, by joint enumeration.
inline std::vector<double> StageActionValues(
    const AggregativeMarkovGame& game, int t, int s, int agent,
    const std::vector<std::vector<double>>& profile,
    const std::vector<double>& continuation) {
  std::vector<double> out;
  for (int a = 0; a < game.num_actions(t, s, agent); ++a) {
    double total = 0.0;
    ForEachJoint(game, t, s, profile, {{agent, a}},
                 [&](const std::vector<int>& joint, double p) {
                   double v = game.Reward(t, s, agent, a, JointAggregate(game, t, s, joint));
                   if (t + 1 < game.horizon()) {
                     const auto next = game.Transition(t, s, joint);
                     for (std::size_t x = 0; x < next.size(); ++x) v += next[x] * continuation[x];
                   }
                   total += p * v;
                 });
    out.push_back(total);
  }
  return out;
}

// Best total raw return over joint actions, by backward induction.
inline double JointOptimum(const AggregativeMarkovGame& game, int initial_state) {
  const int T = game.horizon();
  std::vector<double> next_value;
  for (int t = T - 1; t >= 0; --t) {
    std::vector<double> value(game.num_states(t));
    for (int s = 0; s < game.num_states(t); ++s) {
      std::vector<std::vector<double>> ones;
      for (int j = 0; j < game.num_agents(); ++j) {
        ones.emplace_back(game.num_actions(t, s, j), 1.0);
      }
      double best = -INFINITY;
      ForEachJoint(game, t, s, ones, {}, [&](const std::vector<int>& joint, double) {
        const double g = JointAggregate(game, t, s, joint);
        double v = 0.0;
        for (int j = 0; j < game.num_agents(); ++j) v += game.RawReward(t, s, j, joint[j], g);
        if (t + 1 < T) {
          const auto p = game.Transition(t, s, joint);
          for (std::size_t x = 0; x < p.size(); ++x) v += p[x] * next_value[x];
        }
        best = std::max(best, v);
      });
      value[s] = best;
    }
    next_value = value;
  }
  return next_value[initial_state];
}

// Per-episode evaluation of the certified policy straight from the log:
// memoized on (t, s, k), not on stages, and using joint enumeration.
class NaiveEvaluator {
 public:
  NaiveEvaluator(const PolicySnapshotStore& store, const AggregativeMarkovGame& game,
                 int agent)
      : store_(store), game_(game), agent_(agent) {}

  double Value(int t, int s, int k) { return Eval(t, s, k, false); }
  double BestResponse(int t, int s, int k) { return Eval(t, s, k, true); }

 private:
  double Eval(int t, int s, int k, bool best) {
    if (t >= game_.horizon()) return 0.0;
    const auto key = std::make_tuple(t, s, k, best);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    // Stage of (t, s) containing k: stages whose last visit precedes k.
    int stage = 0;
    for (int m = 0; m < store_.num_completed_stages(t, s); ++m) {
      const int last = store_.StageVisits(t, s, m).second;
      if (store_.VisitEpisode(t, s, last - 1) < k) stage = m + 1;
    }
    std::vector<int> visits_of_prev;
    for (int v = 0; stage > 0 && v < store_.num_visits(t, s); ++v) {
      if (store_.VisitStage(t, s, v) == stage - 1) visits_of_prev.push_back(v);
    }
    double result;
    if (stage == 0) {
      result = best ? game_.horizon() - t : 0.0;
    } else {
      const int n = game_.num_actions(t, s, agent_);
      std::vector<double> sums(n, 0.0);
      double value_sum = 0.0;
      for (int v : visits_of_prev) {
        const int l = store_.VisitEpisode(t, s, v);
        std::vector<std::vector<double>> profile;
        for (int j = 0; j < game_.num_agents(); ++j) {
          const auto pi = store_.VisitPolicy(t, s, v, j);
          profile.emplace_back(pi.begin(), pi.end());
        }
        std::vector<double> cont;
        if (t + 1 < game_.horizon()) {
          for (int x = 0; x < game_.num_states(t + 1); ++x) cont.push_back(Eval(t + 1, x, l, best));
        }
        const auto q = StageActionValues(game_, t, s, agent_, profile, cont);
        for (int a = 0; a < n; ++a) {
          sums[a] += q[a];
          value_sum += profile[agent_][a] * q[a];
        }
      }
      const double c = static_cast<double>(visits_of_prev.size());
      result = best ? *std::max_element(sums.begin(), sums.end()) / c : value_sum / c;
    }
    memo_[key] = result;
    return result;
  }

  const PolicySnapshotStore& store_;
  const AggregativeMarkovGame& game_;
  int agent_;
  std::map<std::tuple<int, int, int, bool>, double> memo_;
};

// Horizon-one gaps of the certified policy at state 0 for `agent`, by
// exhaustive enumeration. `conditioned` lets the deviator pick its action
// knowing the sampled episode (first-stage episodes count as T - value = 1);
// `unconditioned` is the plain CCE gap of the executed mixture, where
// first-stage episodes play uniformly.
struct HorizonOneGaps {
  double conditioned = 0.0;
  double unconditioned = 0.0;
};

inline HorizonOneGaps HorizonOneGap(const PolicySnapshotStore& store,
                                    const AggregativeMarkovGame& game, int agent) {
  const int K = store.num_episodes();
  const int A = game.num_actions(0, 0, agent);
  std::vector<std::vector<double>> uniform;
  for (int j = 0; j < game.num_agents(); ++j) {
    const int n = game.num_actions(0, 0, j);
    uniform.emplace_back(n, 1.0 / n);
  }
  HorizonOneGaps out;
  std::vector<double> mix_dev(A, 0.0);
  double mix_value = 0.0;
  for (int k = 1; k <= K; ++k) {
    std::vector<std::vector<std::vector<double>>> profiles;
    int completed = 0;
    for (int m = 0; m < store.num_completed_stages(0, 0); ++m) {
      const int last = store.StageVisits(0, 0, m).second;
      if (store.VisitEpisode(0, 0, last - 1) < k) completed = m + 1;
    }
    if (completed > 0) {
      for (int v = 0; v < store.num_visits(0, 0); ++v) {
        if (store.VisitStage(0, 0, v) != completed - 1) continue;
        std::vector<std::vector<double>> profile;
        for (int j = 0; j < game.num_agents(); ++j) {
          const auto pi = store.VisitPolicy(0, 0, v, j);
          profile.emplace_back(pi.begin(), pi.end());
        }
        profiles.push_back(profile);
      }
    }
    std::vector<double> dev(A, 0.0);
    double value = 0.0;
    const auto& used = profiles.empty()
                           ? std::vector<std::vector<std::vector<double>>>{uniform}
                           : profiles;
    for (const auto& profile : used) {
      const auto q = StageActionValues(game, 0, 0, agent, profile, {});
      for (int a = 0; a < A; ++a) {
        dev[a] += q[a] / used.size();
        value += profile[agent][a] * q[a] / used.size();
      }
    }
    for (int a = 0; a < A; ++a) mix_dev[a] += dev[a] / K;
    mix_value += value / K;
    if (profiles.empty()) {
      out.conditioned += 1.0 / K;
    } else {
      out.conditioned += (*std::max_element(dev.begin(), dev.end()) - value) / K;
    }
  }
  out.unconditioned = *std::max_element(mix_dev.begin(), mix_dev.end()) - mix_value;
  return out;
}

// Root of sum_a 4 (eta (q_a - x))^-2 = 1 on x < min q, by plain bisection.
inline double NormalizerByBisection(const std::vector<double>& q, double eta) {
  const double qmin = *std::min_element(q.begin(), q.end());
  double lo = qmin - 2.0 * std::sqrt(static_cast<double>(q.size())) / eta - 1.0;
  double hi = qmin - 1e-300;
  auto residual = [&](double x) {
    double total = 0.0;
    for (double v : q) total += 4.0 / ((eta * (v - x)) * (eta * (v - x)));
    return total - 1.0;
  };
  for (int it = 0; it < 2000 && hi - lo > 1e-15 * std::max(1.0, std::fabs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace asvl::oracle

#endif  // ASVL_TESTS_ORACLES_H_
