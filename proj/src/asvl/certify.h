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

#ifndef ASVL_CERTIFY_H_
#define ASVL_CERTIFY_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "asvl/game.h"
#include "asvl/rng.h"
#include "asvl/learner.h"
#include "asvl/snapshot_store.h"

namespace asvl {

// Values of the per-(t, k) correlated policies. They depend on the episode k
// only through the stage of (t, s) that k falls into, so the table is
// indexed by (t, s, m) with m = store.StageAt(t, s, k); stage 0 is the
// "k is in the first stage" case.
class StageValueTable {
 public:
  explicit StageValueTable(const PolicySnapshotStore& store);

  double at(int t, int s, int stage) const { return values_[t][s][stage]; }
  double& at(int t, int s, int stage) { return values_[t][s][stage]; }
  int num_stages(int t, int s) const {
    return static_cast<int>(values_[t][s].size());
  }
  // Value for episode k (1-based); 0 past the horizon.
  double AtEpisode(const PolicySnapshotStore& store, int t, int s,
                   int episode) const;
  // (1/K) sum_k AtEpisode(0, s, k).
  double EpisodeAverage(const PolicySnapshotStore& store, int s) const;
  // EpisodeAverage weighted by the initial distribution.
  double InitialValue(const PolicySnapshotStore& store,
                      const AggregativeMarkovGame& game) const;

 private:
  std::vector<std::vector<std::vector<double>>> values_;
};

// Exact value of agent i under the correlated policies built from the log:
// V(t,s,m) = (1/c) sum_j D_{pi^{t,l_j}} (r_i + P_t V(t+1, ., stage at l_j)),
// 0 in the first stage.
StageValueTable ExactPolicyValue(const PolicySnapshotStore& store,
                                 const AggregativeMarkovGame& game, int agent);

// Recursive upper bound on agent i's best-response value against the others'
// correlated policies: the max over own actions is taken per stage, with the
// remaining horizon T - t as the first-stage value.
StageValueTable BestResponseUpper(const PolicySnapshotStore& store,
                                  const AggregativeMarkovGame& game,
                                  int agent);

struct LowerEstimates {
  StageValueTable lower;      // max(lower_hat, 0)
  StageValueTable lower_hat;  // sample average minus the bonus
};

// Lower confidence values from realized samples; needs a store recorded with
// sample logging.
LowerEstimates ComputeLowerEstimates(const PolicySnapshotStore& store,
                                     const AggregativeMarkovGame& game,
                                     int agent);

struct AgentCertificate {
  int agent = 0;
  double value = 0.0;     // exact value of the output policy
  double br_upper = 0.0;  // upper bound on the best-response value
  double gap = 0.0;       // br_upper - value
};

struct GapCertificate {
  int episodes = 0;
  // Computed from a compact store (per-stage policies only).
  bool approximate = false;
  std::vector<AgentCertificate> agents;
  double gap = 0.0;  // max over agents
};

// Certificate at a fixed initial state, or weighted by the initial
// distribution when `initial_state` is empty.
GapCertificate ComputeGapCertificate(const PolicySnapshotStore& store,
                                     const AggregativeMarkovGame& game,
                                     std::optional<int> initial_state = {});

// Counts of the optimism check V_bar(1, s, k) >= best-response bound and the
// pessimism check V(1, s, k) >= V_lower over every (agent, episode).
struct SandwichReport {
  int checks = 0;
  int upper_holds = 0;
  int lower_holds = 0;
};

SandwichReport CheckConfidenceSandwich(const PolicySnapshotStore& store,
                                       const AggregativeMarkovGame& game,
                                       int initial_state);

struct EpisodeTrace {
  int sampled_episode = 0;
  std::vector<int> states;
  std::vector<std::vector<int>> actions;  // [t][agent]
  std::vector<std::vector<double>> rewards;  // normalized, [t][agent]
  std::vector<bool> fallback;  // uniform play because k was in a first stage
};

// Executable output policy: draw k uniformly from [K], then at every step
// jump to a uniformly chosen visit of the previous stage of the current
// (t, s) and play the joint policy logged there.
class CertifiedPolicy {
 public:
  CertifiedPolicy(const PolicySnapshotStore& store, std::uint64_t shared_seed);

  EpisodeTrace SampleTrajectory(const AggregativeMarkovGame& game,
                                Rng& env_rng);

 private:
  const PolicySnapshotStore& store_;
  Rng rng_;
};

}  // namespace asvl

#endif  // ASVL_CERTIFY_H_
