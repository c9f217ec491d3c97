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

#ifndef ASVL_SNAPSHOT_STORE_H_
#define ASVL_SNAPSHOT_STORE_H_

#include <iosfwd>
#include <span>
#include <vector>

#include "asvl/game.h"

namespace asvl {

struct StoreOptions {
  // Keep one policy per stage (the last one used to act) instead of one per
  // visit. Certificates computed from a compact store are approximate.
  bool compact = false;
  // Keep realized joint actions, next states and rewards, needed by the
  // lower confidence estimates.
  bool log_samples = false;
};

// Log of the acting policies of every agent at every visit of every
// (step, state), plus the stage structure of each pair. Episodes are
// numbered 1..K; steps, states, agents and stages are 0-based.
class PolicySnapshotStore {
 public:
  PolicySnapshotStore(const AggregativeMarkovGame& game, StoreOptions options);

  int horizon() const { return horizon_; }
  int num_agents() const { return num_agents_; }
  int num_states(int t) const { return static_cast<int>(logs_[t].size()); }
  int num_actions(int t, int s, int agent) const;
  const StoreOptions& options() const { return options_; }
  // Episodes 1..num_episodes() have been fully recorded.
  int num_episodes() const { return num_episodes_; }

  // Parameters of the learner that produced the log; used by the lower
  // confidence estimates.
  void SetLearnerParameters(double iota, double bonus_scale,
                            std::vector<int> max_actions);
  double iota() const { return iota_; }
  double bonus_scale() const { return bonus_scale_; }
  int max_actions(int agent) const { return max_actions_.at(agent); }

  // `policies` holds, per agent, the distribution the action was drawn from.
  void RecordVisit(int t, int s, int episode, int stage, ProfileView policies);
  // Attaches the realized outcome to the latest visit of (t, s). `rewards`
  // are normalized; next_state is -1 at the last step.
  void RecordSample(int t, int s, std::span<const int> joint_action,
                    int next_state, std::span<const double> rewards);
  // Closes the current stage of (t, s) in `episode`. `upper_values` holds
  // each agent's optimistic value right after the update.
  void RecordStageEnd(int t, int s, int episode,
                      std::span<const double> upper_values);
  void FinishEpisode(int episode);

  int num_visits(int t, int s) const {
    return static_cast<int>(logs_[t][s].visit_episode.size());
  }
  int num_completed_stages(int t, int s) const {
    return static_cast<int>(logs_[t][s].stage_end_episode.size());
  }
  // Stages of (t, s) completed before `episode` starts.
  int StageAt(int t, int s, int episode) const;
  // Visit indices [first, last) of stage `stage`.
  std::pair<int, int> StageVisits(int t, int s, int stage) const;
  int VisitEpisode(int t, int s, int visit) const {
    return logs_[t][s].visit_episode[visit];
  }
  int VisitStage(int t, int s, int visit) const {
    return logs_[t][s].visit_stage[visit];
  }
  PolicyView VisitPolicy(int t, int s, int visit, int agent) const;
  std::vector<PolicyView> VisitProfile(int t, int s, int visit) const;

  bool has_samples() const { return options_.log_samples; }
  std::span<const int> VisitJointAction(int t, int s, int visit) const;
  int VisitNextState(int t, int s, int visit) const;
  double VisitReward(int t, int s, int visit, int agent) const;

  // Optimistic value of `agent` at (t, s) at the start of `episode`.
  double UpperValueAtEpisode(int t, int s, int agent, int episode) const;

  // Line-oriented text form; Read(Write(x)) reproduces x exactly.
  void Write(std::ostream& out) const;
  static PolicySnapshotStore Read(std::istream& in);

 private:
  PolicySnapshotStore() = default;

  struct StateLog {
    std::vector<int> action_offsets;  // per agent, into a policy block
    int block_size = 0;
    std::vector<int> visit_episode;
    std::vector<int> visit_stage;
    std::vector<double> policy_data;  // per visit, or per stage if compact
    std::vector<int> stage_begin;     // first visit of each stage
    std::vector<int> stage_end_episode;
    std::vector<double> upper_after;  // per completed stage x agent
    std::vector<int> sample_actions;
    std::vector<int> sample_next;
    std::vector<double> sample_rewards;
  };

  const StateLog& log(int t, int s) const;
  StateLog& log(int t, int s);

  int horizon_ = 0;
  int num_agents_ = 0;
  StoreOptions options_;
  int num_episodes_ = 0;
  double iota_ = 1.0;
  double bonus_scale_ = 4.0;
  std::vector<int> max_actions_;
  std::vector<std::vector<StateLog>> logs_;
};

}  // namespace asvl

#endif  // ASVL_SNAPSHOT_STORE_H_
