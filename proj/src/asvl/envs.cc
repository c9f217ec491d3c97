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

#include "asvl/envs.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "asvl/rng.h"
#include "json.hpp"

namespace asvl {
namespace {

bool Near(double a, double b) { return std::fabs(a - b) < 1e-9; }

bool ValidEffort(double e) {
  return Near(e, kFishermenMany) || Near(e, kFishermenFew);
}

bool ValidTotal(double a) { return Near(a, 6) || Near(a, 8) || Near(a, 10); }

void CheckState(int state) {
  if (state != kFishermenHigh && state != kFishermenLow) {
    throw Error("fishermen state out of range: " + std::to_string(state));
  }
}

std::vector<double> Dirichlet(int n, Rng& rng) {
  std::vector<double> p(n);
  double total = 0.0;
  for (double& x : p) {
    x = -std::log1p(-rng.Uniform01());
    total += x;
  }
  for (double& x : p) x /= total;
  // Push rounding error onto the largest entry so the row sums to 1.
  double sum = 0.0;
  for (double x : p) sum += x;
  auto it = std::max_element(p.begin(), p.end());
  *it += 1.0 - sum;
  return p;
}

// Lookup table keyed by aggregate value, tolerant to float noise.
long AggregateKey(double g) { return std::lround(g * 1e6); }

}  // namespace

double FishermenReward(int state, double own_effort, double total_effort) {
  CheckState(state);
  if (!ValidEffort(own_effort)) {
    throw Error("fishermen effort must be 3 or 5");
  }
  if (!ValidTotal(total_effort) ||
      !ValidEffort(total_effort - own_effort)) {
    throw Error("fishermen total effort must be 6, 8 or 10");
  }
  const double f = -0.5 * own_effort * own_effort + 11.5 * own_effort + 1.0;
  const double g = 0.25 * total_effort * total_effort - 0.5 * total_effort + 16.0;
  const double c = state == kFishermenHigh ? 0.0 : 1.0;
  return f - g - c;
}

std::vector<double> FishermenTransition(int state, double total_effort) {
  CheckState(state);
  if (!ValidTotal(total_effort)) {
    throw Error("fishermen total effort must be 6, 8 or 10");
  }
  double high;
  if (Near(total_effort, 6)) {
    high = 1.0;
  } else if (Near(total_effort, 8)) {
    high = state == kFishermenHigh ? 2.0 / 3.0 : 0.5;
  } else {
    high = state == kFishermenHigh ? 0.2 : 0.0;
  }
  return {high, 1.0 - high};
}

AggregativeMarkovGame MakeFishermenGame(int initial_state) {
  CheckState(initial_state);
  AggregativeMarkovGame::Definition def;
  def.name = "fishermen";
  def.horizon = 2;
  def.num_agents = 2;
  def.num_states = {2, 2};
  const std::vector<double> efforts = {kFishermenMany, kFishermenFew};
  def.action_values.assign(
      2, std::vector<std::vector<std::vector<double>>>(
             2, std::vector<std::vector<double>>(2, efforts)));
  def.aggregator = Aggregator::kSum;
  def.raw_reward = [efforts](int, int s, int, int action, double aggregate) {
    return FishermenReward(s, efforts[action], aggregate);
  };
  def.reward_scale = {2.0, 16.0};
  def.aggregate_transition = [](int, int s, double aggregate) {
    return FishermenTransition(s, aggregate);
  };
  def.initial_distribution = {0.0, 0.0};
  def.initial_distribution[initial_state] = 1.0;
  def.require_positive_aggregates = true;
  return AggregativeMarkovGame(std::move(def));
}

AggregativeMarkovGame RandomAmg(const RandomAmgOptions& o) {
  if (o.horizon < 1 || o.num_agents < 1 || o.num_states < 1 ||
      o.num_actions < 1) {
    throw Error("random game sizes must be positive");
  }
  Rng rng(DeriveSeed(o.seed, StreamPurpose::kGenerator));
  const int T = o.horizon, N = o.num_agents, S = o.num_states,
            A = o.num_actions;
  AggregativeMarkovGame::Definition def;
  def.name = "random";
  def.horizon = T;
  def.num_agents = N;
  def.num_states.assign(T, S);
  def.action_values.resize(T);
  for (int t = 0; t < T; ++t) {
    def.action_values[t].resize(S);
    for (int s = 0; s < S; ++s) {
      for (int i = 0; i < N; ++i) {
        std::vector<double> values;
        for (int a = 0; a < A; ++a) values.push_back(1 + rng.UniformInt(4));
        def.action_values[t][s].push_back(values);
      }
    }
  }
  // Global SUM aggregates are integers in [N, 4N].
  const int num_g = 3 * N + 1;
  auto rewards = std::make_shared<std::vector<double>>();
  for (int t = 0; t < T; ++t)
    for (int s = 0; s < S; ++s)
      for (int i = 0; i < N; ++i)
        for (int a = 0; a < A; ++a)
          for (int g = 0; g < num_g; ++g) rewards->push_back(rng.Uniform01());
  def.aggregator = Aggregator::kSum;
  def.raw_reward = [rewards, S, N, A, num_g](int t, int s, int i, int a,
                                             double aggregate) {
    const long g = std::lround(aggregate) - N;
    if (g < 0 || g >= num_g) throw Error("aggregate outside the game's range");
    return (*rewards)[(((static_cast<std::size_t>(t) * S + s) * N + i) * A + a) *
                          num_g + g];
  };
  auto rows = std::make_shared<std::vector<std::vector<double>>>();
  if (o.aggregate_dependent) {
    for (int t = 0; t + 1 < T; ++t)
      for (int s = 0; s < S; ++s)
        for (int g = 0; g < num_g; ++g) rows->push_back(Dirichlet(S, rng));
    def.aggregate_transition = [rows, S, N, num_g](int t, int s,
                                                   double aggregate) {
      const long g = std::lround(aggregate) - N;
      if (g < 0 || g >= num_g) throw Error("aggregate outside the game's range");
      return (*rows)[(static_cast<std::size_t>(t) * S + s) * num_g + g];
    };
  } else {
    std::int64_t joint = 1;
    for (int i = 0; i < N; ++i) {
      joint *= A;
      if (joint > kMaxJointSpace) {
        throw Error("joint space too large; transition not aggregate-dependent");
      }
    }
    for (int t = 0; t + 1 < T; ++t)
      for (int s = 0; s < S; ++s)
        for (std::int64_t j = 0; j < joint; ++j)
          rows->push_back(Dirichlet(S, rng));
    def.joint_transition = [rows, S, A, joint](int t, int s,
                                               std::span<const int> actions) {
      std::int64_t index = 0;
      for (int a : actions) index = index * A + a;
      return (*rows)[(static_cast<std::size_t>(t) * S + s) * joint + index];
    };
  }
  def.initial_distribution = Dirichlet(S, rng);
  def.require_positive_aggregates = true;
  return AggregativeMarkovGame(std::move(def));
}

AggregativeMarkovGame LoadGame(std::istream& in) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(std::string("game file: ") + e.what());
  }
  try {
    AggregativeMarkovGame::Definition def;
    def.name = doc.value("name", std::string("custom"));
    def.horizon = doc.at("horizon").get<int>();
    def.num_agents = doc.at("num_agents").get<int>();
    def.aggregator = ParseAggregator(doc.value("aggregator", std::string("sum")));
    def.action_values = doc.at("action_values")
                            .get<std::vector<std::vector<
                                std::vector<std::vector<double>>>>>();
    for (const auto& step : def.action_values) {
      def.num_states.push_back(static_cast<int>(step.size()));
    }
    if (doc.contains("reward_scale")) {
      def.reward_scale.offset = doc["reward_scale"].value("offset", 0.0);
      def.reward_scale.scale = doc["reward_scale"].value("scale", 1.0);
    }
    def.initial_distribution =
        doc.at("initial_distribution").get<std::vector<double>>();
    def.require_positive_aggregates = doc.value("positive_aggregates", false);

    // rewards[t][s][agent][action] = [[aggregate, raw], ...]
    using Table = std::map<long, double>;
    auto rewards = std::make_shared<std::vector<std::vector<
        std::vector<std::vector<Table>>>>>();
    for (const auto& step : doc.at("rewards")) {
      auto& rs = rewards->emplace_back();
      for (const auto& state : step) {
        auto& ra = rs.emplace_back();
        for (const auto& agent : state) {
          auto& rb = ra.emplace_back();
          for (const auto& action : agent) {
            Table& table = rb.emplace_back();
            for (const auto& entry : action) {
              table[AggregateKey(entry.at(0).get<double>())] =
                  entry.at(1).get<double>();
            }
          }
        }
      }
    }
    def.raw_reward = [rewards](int t, int s, int i, int a, double g) {
      const auto& table = rewards->at(t).at(s).at(i).at(a);
      auto it = table.find(AggregateKey(g));
      if (it == table.end()) throw Error("game file has no reward for aggregate");
      return it->second;
    };

    // transitions[t][s] = [[aggregate, [p_0, ...]], ...]
    using Rows = std::map<long, std::vector<double>>;
    auto transitions = std::make_shared<std::vector<std::vector<Rows>>>();
    for (const auto& step : doc.value("transitions", json::array())) {
      auto& ts = transitions->emplace_back();
      for (const auto& state : step) {
        Rows& rows = ts.emplace_back();
        for (const auto& entry : state) {
          rows[AggregateKey(entry.at(0).get<double>())] =
              entry.at(1).get<std::vector<double>>();
        }
      }
    }
    if (def.horizon > 1) {
      def.aggregate_transition = [transitions](int t, int s, double g) {
        const auto& rows = transitions->at(t).at(s);
        auto it = rows.find(AggregateKey(g));
        if (it == rows.end()) {
          throw Error("game file has no transition for aggregate");
        }
        return it->second;
      };
    }
    return AggregativeMarkovGame(std::move(def));
  } catch (const json::exception& e) {
    throw Error(std::string("game file: ") + e.what());
  } catch (const std::out_of_range&) {
    throw Error("game file: table does not cover the game");
  }
}

AggregativeMarkovGame LoadGameFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open game file: " + path);
  return LoadGame(in);
}

AggregativeMarkovGame MakeEnvironment(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  std::map<std::string, std::string> args;
  if (colon != std::string::npos && (head == "fishermen" || head == "random")) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error("bad environment option: " + item);
      args[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  auto take_int = [&](const std::string& key, long fallback) {
    auto it = args.find(key);
    if (it == args.end()) return fallback;
    try {
      std::size_t used = 0;
      const long v = std::stol(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(key);
      args.erase(it);
      return v;
    } catch (const std::logic_error&) {
      throw Error("bad environment option: " + key);
    }
  };
  if (head == "fishermen") {
    int initial = kFishermenHigh;
    if (auto it = args.find("initial"); it != args.end()) {
      if (it->second == "high") {
        initial = kFishermenHigh;
      } else if (it->second == "low") {
        initial = kFishermenLow;
      } else {
        throw Error("bad environment option: initial");
      }
      args.erase(it);
    }
    if (!args.empty()) throw Error("bad environment option: " + args.begin()->first);
    return MakeFishermenGame(initial);
  }
  if (head == "random") {
    RandomAmgOptions o;
    o.horizon = take_int("T", o.horizon);
    o.num_agents = take_int("N", o.num_agents);
    o.num_states = take_int("S", o.num_states);
    o.num_actions = take_int("A", o.num_actions);
    o.seed = take_int("seed", 0);
    o.aggregate_dependent = take_int("agg", 1) != 0;
    if (!args.empty()) throw Error("bad environment option: " + args.begin()->first);
    return RandomAmg(o);
  }
  return LoadGameFile(spec);
}

}  // namespace asvl
