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

#ifndef ASVL_ENVS_H_
#define ASVL_ENVS_H_

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "asvl/game.h"

namespace asvl {

// Fishermen game: two fishermen, high (0) and low (1) fish stock, actions
// "many nets" (index 0, value 5) and "few nets" (index 1, value 3).
inline constexpr int kFishermenHigh = 0;
inline constexpr int kFishermenLow = 1;
inline constexpr double kFishermenMany = 5.0;
inline constexpr double kFishermenFew = 3.0;

// Raw payoff f(a_i) - g(a) - c(s) for own effort a_i and total effort a.
double FishermenReward(int state, double own_effort, double total_effort);
// Probabilities of (high, low) next stock given the total effort.
std::vector<double> FishermenTransition(int state, double total_effort);

// Two steps with identical stage games; raw payoffs [2, 18] are normalized
// by (x - 2) / 16.
AggregativeMarkovGame MakeFishermenGame(int initial_state = kFishermenHigh);

struct RandomAmgOptions {
  std::uint64_t seed = 0;
  int horizon = 2;
  int num_agents = 2;
  int num_states = 2;
  int num_actions = 2;
  bool aggregate_dependent = true;
};

// Random SUM game with integer action values in 1..4, rewards uniform in
// [0, 1] tabulated over (t, s, agent, action, aggregate), and Dirichlet(1)
// transitions keyed by the aggregate or by the joint action.
AggregativeMarkovGame RandomAmg(const RandomAmgOptions& options);

// Game from a JSON document; see README for the schema.
AggregativeMarkovGame LoadGame(std::istream& in);
AggregativeMarkovGame LoadGameFile(const std::string& path);

// "fishermen", "fishermen:initial=low", "random:T=2,N=3,S=2,A=2,seed=7,agg=1"
// or a path to a game file.
AggregativeMarkovGame MakeEnvironment(const std::string& spec);

}  // namespace asvl

#endif  // ASVL_ENVS_H_
