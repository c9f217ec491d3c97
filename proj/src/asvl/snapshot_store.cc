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

#include "asvl/snapshot_store.h"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string>
#include <utility>

namespace asvl {
namespace {

constexpr const char* kMagic = "asvl-snapshot-store";
constexpr int kFormatVersion = 1;

void Expect(std::istream& in, const std::string& word) {
  std::string token;
  if (!(in >> token) || token != word) {
    throw Error("snapshot store: expected '" + word + "', got '" + token +
                "'");
  }
}

template <typename T>
T ReadValue(std::istream& in, const char* what) {
  T value{};
  if (!(in >> value)) {
    throw Error(std::string("snapshot store: cannot read ") + what);
  }
  return value;
}

}  // namespace

PolicySnapshotStore::PolicySnapshotStore(const AggregativeMarkovGame& game,
                                         StoreOptions options)
    : horizon_(game.horizon()),
      num_agents_(game.num_agents()),
      options_(options) {
  for (int i = 0; i < num_agents_; ++i) {
    max_actions_.push_back(game.max_actions(i));
  }
  logs_.resize(horizon_);
  for (int t = 0; t < horizon_; ++t) {
    logs_[t].resize(game.num_states(t));
    for (int s = 0; s < game.num_states(t); ++s) {
      StateLog& l = logs_[t][s];
      for (int i = 0; i < num_agents_; ++i) {
        l.action_offsets.push_back(l.block_size);
        l.block_size += game.num_actions(t, s, i);
      }
      l.action_offsets.push_back(l.block_size);
    }
  }
}

const PolicySnapshotStore::StateLog& PolicySnapshotStore::log(int t,
                                                              int s) const {
  if (t < 0 || t >= horizon_ || s < 0 ||
      s >= static_cast<int>(logs_[t].size())) {
    throw Error("snapshot store: no pair (t=" + std::to_string(t) +
                ", s=" + std::to_string(s) + ")");
  }
  return logs_[t][s];
}

PolicySnapshotStore::StateLog& PolicySnapshotStore::log(int t, int s) {
  return const_cast<StateLog&>(std::as_const(*this).log(t, s));
}

int PolicySnapshotStore::num_actions(int t, int s, int agent) const {
  const StateLog& l = log(t, s);
  return l.action_offsets[agent + 1] - l.action_offsets[agent];
}

void PolicySnapshotStore::SetLearnerParameters(double iota, double bonus_scale,
                                               std::vector<int> max_actions) {
  if (static_cast<int>(max_actions.size()) != num_agents_) {
    throw Error("snapshot store: one action count per agent expected");
  }
  iota_ = iota;
  bonus_scale_ = bonus_scale;
  max_actions_ = std::move(max_actions);
}

void PolicySnapshotStore::RecordVisit(int t, int s, int episode, int stage,
                                      ProfileView policies) {
  StateLog& l = log(t, s);
  if (static_cast<int>(policies.size()) != num_agents_) {
    throw Error("snapshot store: one policy per agent expected");
  }
  if (!l.visit_episode.empty() && episode <= l.visit_episode.back()) {
    throw Error("snapshot store: episode indices must increase");
  }
  if (episode <= num_episodes_) {
    throw Error("snapshot store: episode already finished");
  }
  for (int i = 0; i < num_agents_; ++i) {
    if (static_cast<int>(policies[i].size()) !=
        l.action_offsets[i + 1] - l.action_offsets[i]) {
      throw Error("snapshot store: policy size mismatch");
    }
  }
  const int completed = static_cast<int>(l.stage_end_episode.size());
  if (stage != completed) {
    throw Error("snapshot store: visit stage " + std::to_string(stage) +
                " but " + std::to_string(completed) + " stages completed");
  }
  const bool new_stage = static_cast<int>(l.stage_begin.size()) == stage;
  if (new_stage) l.stage_begin.push_back(static_cast<int>(l.visit_episode.size()));
  l.visit_episode.push_back(episode);
  l.visit_stage.push_back(stage);

  std::size_t offset = l.policy_data.size();
  if (options_.compact) {
    offset = static_cast<std::size_t>(stage) * l.block_size;
    if (new_stage) l.policy_data.resize(offset + l.block_size);
  } else {
    l.policy_data.resize(offset + l.block_size);
  }
  for (int i = 0; i < num_agents_; ++i) {
    std::copy(policies[i].begin(), policies[i].end(),
              l.policy_data.begin() + offset + l.action_offsets[i]);
  }
}

void PolicySnapshotStore::RecordSample(int t, int s,
                                       std::span<const int> joint_action,
                                       int next_state,
                                       std::span<const double> rewards) {
  if (!options_.log_samples) return;
  StateLog& l = log(t, s);
  if (l.sample_next.size() + 1 != l.visit_episode.size()) {
    throw Error("snapshot store: sample without a matching visit");
  }
  if (static_cast<int>(joint_action.size()) != num_agents_ ||
      static_cast<int>(rewards.size()) != num_agents_) {
    throw Error("snapshot store: sample size mismatch");
  }
  l.sample_actions.insert(l.sample_actions.end(), joint_action.begin(),
                          joint_action.end());
  l.sample_next.push_back(next_state);
  l.sample_rewards.insert(l.sample_rewards.end(), rewards.begin(),
                          rewards.end());
}

void PolicySnapshotStore::RecordStageEnd(int t, int s, int episode,
                                         std::span<const double> upper_values) {
  StateLog& l = log(t, s);
  if (l.visit_episode.empty() || l.visit_episode.back() != episode) {
    throw Error("snapshot store: stage must end on a visit");
  }
  if (l.stage_begin.size() != l.stage_end_episode.size() + 1) {
    throw Error("snapshot store: no open stage to close");
  }
  if (static_cast<int>(upper_values.size()) != num_agents_) {
    throw Error("snapshot store: one upper value per agent expected");
  }
  l.stage_end_episode.push_back(episode);
  l.upper_after.insert(l.upper_after.end(), upper_values.begin(),
                       upper_values.end());
}

void PolicySnapshotStore::FinishEpisode(int episode) {
  if (episode != num_episodes_ + 1) {
    throw Error("snapshot store: episodes must finish in order");
  }
  num_episodes_ = episode;
}

int PolicySnapshotStore::StageAt(int t, int s, int episode) const {
  const auto& ends = log(t, s).stage_end_episode;
  return static_cast<int>(
      std::lower_bound(ends.begin(), ends.end(), episode) - ends.begin());
}

std::pair<int, int> PolicySnapshotStore::StageVisits(int t, int s,
                                                     int stage) const {
  const StateLog& l = log(t, s);
  if (stage < 0 || stage >= static_cast<int>(l.stage_begin.size())) {
    throw Error("snapshot store: stage " + std::to_string(stage) +
                " has no visits");
  }
  const int last = stage + 1 < static_cast<int>(l.stage_begin.size())
                       ? l.stage_begin[stage + 1]
                       : static_cast<int>(l.visit_episode.size());
  return {l.stage_begin[stage], last};
}

PolicyView PolicySnapshotStore::VisitPolicy(int t, int s, int visit,
                                            int agent) const {
  const StateLog& l = log(t, s);
  const std::size_t block =
      options_.compact ? static_cast<std::size_t>(l.visit_stage[visit])
                       : static_cast<std::size_t>(visit);
  const std::size_t begin = block * l.block_size + l.action_offsets[agent];
  const std::size_t n = l.action_offsets[agent + 1] - l.action_offsets[agent];
  return PolicyView(l.policy_data.data() + begin, n);
}

std::vector<PolicyView> PolicySnapshotStore::VisitProfile(int t, int s,
                                                          int visit) const {
  std::vector<PolicyView> out;
  out.reserve(num_agents_);
  for (int i = 0; i < num_agents_; ++i) out.push_back(VisitPolicy(t, s, visit, i));
  return out;
}

std::span<const int> PolicySnapshotStore::VisitJointAction(int t, int s,
                                                           int visit) const {
  if (!options_.log_samples) {
    throw Error("run was recorded without sample logging");
  }
  const StateLog& l = log(t, s);
  return std::span<const int>(l.sample_actions.data() +
                                  static_cast<std::size_t>(visit) * num_agents_,
                              num_agents_);
}

int PolicySnapshotStore::VisitNextState(int t, int s, int visit) const {
  if (!options_.log_samples) {
    throw Error("run was recorded without sample logging");
  }
  return log(t, s).sample_next[visit];
}

double PolicySnapshotStore::VisitReward(int t, int s, int visit,
                                        int agent) const {
  if (!options_.log_samples) {
    throw Error("run was recorded without sample logging");
  }
  return log(t, s)
      .sample_rewards[static_cast<std::size_t>(visit) * num_agents_ + agent];
}

double PolicySnapshotStore::UpperValueAtEpisode(int t, int s, int agent,
                                                int episode) const {
  const int stage = StageAt(t, s, episode);
  if (stage == 0) return horizon_ - t;
  return log(t, s)
      .upper_after[static_cast<std::size_t>(stage - 1) * num_agents_ + agent];
}

void PolicySnapshotStore::Write(std::ostream& out) const {
  out << std::setprecision(17);
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "horizon " << horizon_ << " agents " << num_agents_ << " episodes "
      << num_episodes_ << " compact " << (options_.compact ? 1 : 0)
      << " samples " << (options_.log_samples ? 1 : 0) << '\n';
  out << "learner " << iota_ << ' ' << bonus_scale_;
  for (int a : max_actions_) out << ' ' << a;
  out << '\n';
  out << "states";
  for (int t = 0; t < horizon_; ++t) out << ' ' << logs_[t].size();
  out << '\n';
  for (int t = 0; t < horizon_; ++t) {
    for (int s = 0; s < num_states(t); ++s) {
      const StateLog& l = logs_[t][s];
      out << "state " << t << ' ' << s << " actions";
      for (int i = 0; i < num_agents_; ++i) out << ' ' << num_actions(t, s, i);
      out << " visits " << l.visit_episode.size() << " stages "
          << l.stage_end_episode.size() << '\n';
      for (std::size_t v = 0; v < l.visit_episode.size(); ++v) {
        out << "v " << l.visit_episode[v] << ' ' << l.visit_stage[v];
        if (!options_.compact) {
          for (int k = 0; k < l.block_size; ++k) {
            out << ' ' << l.policy_data[v * l.block_size + k];
          }
        }
        if (options_.log_samples) {
          for (int i = 0; i < num_agents_; ++i) {
            out << ' ' << l.sample_actions[v * num_agents_ + i];
          }
          out << ' ' << l.sample_next[v];
          for (int i = 0; i < num_agents_; ++i) {
            out << ' ' << l.sample_rewards[v * num_agents_ + i];
          }
        }
        out << '\n';
      }
      if (options_.compact) {
        for (std::size_t m = 0; m < l.stage_begin.size(); ++m) {
          out << "p " << m;
          for (int k = 0; k < l.block_size; ++k) {
            out << ' ' << l.policy_data[m * l.block_size + k];
          }
          out << '\n';
        }
      }
      for (std::size_t m = 0; m < l.stage_end_episode.size(); ++m) {
        out << "e " << l.stage_end_episode[m];
        for (int i = 0; i < num_agents_; ++i) {
          out << ' ' << l.upper_after[m * num_agents_ + i];
        }
        out << '\n';
      }
    }
  }
  out << "end\n";
}

PolicySnapshotStore PolicySnapshotStore::Read(std::istream& in) {
  Expect(in, kMagic);
  if (ReadValue<int>(in, "version") != kFormatVersion) {
    throw Error("snapshot store: unsupported format version");
  }
  PolicySnapshotStore store;
  Expect(in, "horizon");
  store.horizon_ = ReadValue<int>(in, "horizon");
  Expect(in, "agents");
  store.num_agents_ = ReadValue<int>(in, "agents");
  Expect(in, "episodes");
  store.num_episodes_ = ReadValue<int>(in, "episodes");
  Expect(in, "compact");
  store.options_.compact = ReadValue<int>(in, "compact") != 0;
  Expect(in, "samples");
  store.options_.log_samples = ReadValue<int>(in, "samples") != 0;
  if (store.horizon_ < 1 || store.num_agents_ < 1) {
    throw Error("snapshot store: invalid header");
  }
  Expect(in, "learner");
  store.iota_ = ReadValue<double>(in, "iota");
  store.bonus_scale_ = ReadValue<double>(in, "bonus scale");
  for (int i = 0; i < store.num_agents_; ++i) {
    store.max_actions_.push_back(ReadValue<int>(in, "action count"));
  }
  Expect(in, "states");
  store.logs_.resize(store.horizon_);
  for (int t = 0; t < store.horizon_; ++t) {
    store.logs_[t].resize(ReadValue<int>(in, "state count"));
  }
  const int n = store.num_agents_;
  for (int t = 0; t < store.horizon_; ++t) {
    for (int s = 0; s < store.num_states(t); ++s) {
      Expect(in, "state");
      if (ReadValue<int>(in, "t") != t || ReadValue<int>(in, "s") != s) {
        throw Error("snapshot store: state blocks out of order");
      }
      StateLog& l = store.logs_[t][s];
      Expect(in, "actions");
      for (int i = 0; i < n; ++i) {
        l.action_offsets.push_back(l.block_size);
        l.block_size += ReadValue<int>(in, "action count");
      }
      l.action_offsets.push_back(l.block_size);
      Expect(in, "visits");
      const auto visits = ReadValue<std::size_t>(in, "visit count");
      Expect(in, "stages");
      const auto stages = ReadValue<std::size_t>(in, "stage count");
      for (std::size_t v = 0; v < visits; ++v) {
        Expect(in, "v");
        l.visit_episode.push_back(ReadValue<int>(in, "episode"));
        const int stage = ReadValue<int>(in, "stage");
        if (l.stage_begin.size() == static_cast<std::size_t>(stage)) {
          l.stage_begin.push_back(static_cast<int>(v));
        } else if (l.stage_begin.size() != static_cast<std::size_t>(stage) + 1) {
          throw Error("snapshot store: stage indices must be contiguous");
        }
        l.visit_stage.push_back(stage);
        if (!store.options_.compact) {
          for (int k = 0; k < l.block_size; ++k) {
            l.policy_data.push_back(ReadValue<double>(in, "policy"));
          }
        }
        if (store.options_.log_samples) {
          for (int i = 0; i < n; ++i) {
            l.sample_actions.push_back(ReadValue<int>(in, "action"));
          }
          l.sample_next.push_back(ReadValue<int>(in, "next state"));
          for (int i = 0; i < n; ++i) {
            l.sample_rewards.push_back(ReadValue<double>(in, "reward"));
          }
        }
      }
      if (store.options_.compact) {
        for (std::size_t m = 0; m < l.stage_begin.size(); ++m) {
          Expect(in, "p");
          if (ReadValue<std::size_t>(in, "stage") != m) {
            throw Error("snapshot store: policy blocks out of order");
          }
          for (int k = 0; k < l.block_size; ++k) {
            l.policy_data.push_back(ReadValue<double>(in, "policy"));
          }
        }
      }
      for (std::size_t m = 0; m < stages; ++m) {
        Expect(in, "e");
        l.stage_end_episode.push_back(ReadValue<int>(in, "episode"));
        for (int i = 0; i < n; ++i) {
          l.upper_after.push_back(ReadValue<double>(in, "upper value"));
        }
      }
    }
  }
  Expect(in, "end");
  return store;
}

}  // namespace asvl
