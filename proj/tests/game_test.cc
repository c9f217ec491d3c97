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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "asvl/envs.h"
#include "asvl/rng.h"
#include "oracles.h"

namespace asvl {
namespace {

std::vector<PolicyView> Views(const std::vector<std::vector<double>>& p) {
  return std::vector<PolicyView>(p.begin(), p.end());
}

// Game with one step, `values[j]` action values for agent j and reward equal
// to the aggregate / 100.
AggregativeMarkovGame StaticGame(std::vector<std::vector<double>> values,
                                 Aggregator aggregator) {
  AggregativeMarkovGame::Definition def;
  def.horizon = 1;
  def.num_agents = static_cast<int>(values.size());
  def.num_states = {1};
  def.action_values = {{values}};
  def.aggregator = aggregator;
  def.raw_reward = [](int, int, int, int, double g) { return g / 100.0; };
  def.initial_distribution = {1.0};
  return AggregativeMarkovGame(def);
}

TEST(AggregateTest, Examples) {
  const std::vector<double> a = {5, 5}, b = {3}, c = {3, 5};
  EXPECT_EQ(Aggregate(a, Aggregator::kSum), 10);
  EXPECT_EQ(Aggregate(b, Aggregator::kSum), 3);
  EXPECT_EQ(Aggregate(c, Aggregator::kMean), 4);
  EXPECT_THROW(Aggregate({}, Aggregator::kSum), Error);
  try {
    Aggregate({}, Aggregator::kMean);
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "empty aggregate");
  }
}

TEST(AggregateTest, ParseNames) {
  EXPECT_EQ(ParseAggregator("sum"), Aggregator::kSum);
  EXPECT_EQ(ParseAggregator("mean"), Aggregator::kMean);
  EXPECT_EQ(AggregatorName(Aggregator::kMean), "mean");
  EXPECT_THROW(ParseAggregator("max"), Error);
}

TEST(OpponentDistributionTest, TwoUniformOpponents) {
  const auto game = StaticGame({{1}, {3, 5}, {3, 5}}, Aggregator::kSum);
  const std::vector<std::vector<double>> p = {{1.0}, {0.5, 0.5}, {0.5, 0.5}};
  const auto views = Views(p);
  const auto d = OpponentAggregateDistribution(game, 0, 0, 0, views);
  ASSERT_EQ(d.support, (std::vector<double>{6, 8, 10}));
  EXPECT_NEAR(d.probs[0], 0.25, 1e-15);
  EXPECT_NEAR(d.probs[1], 0.5, 1e-15);
  EXPECT_NEAR(d.probs[2], 0.25, 1e-15);
}

TEST(OpponentDistributionTest, PointMasses) {
  const auto one = StaticGame({{3}, {5}}, Aggregator::kSum);
  const std::vector<std::vector<double>> p1 = {{1.0}, {1.0}};
  const auto v1 = Views(p1);
  auto d = OpponentAggregateDistribution(one, 0, 0, 0, v1);
  EXPECT_EQ(d.support, std::vector<double>{5});
  EXPECT_EQ(d.probs, std::vector<double>{1.0});

  const auto three = StaticGame({{1}, {3, 5}, {3, 5}, {3, 5}}, Aggregator::kSum);
  const std::vector<std::vector<double>> p3 = {{1.0}, {1, 0}, {1, 0}, {0, 1}};
  const auto v3 = Views(p3);
  d = OpponentAggregateDistribution(three, 0, 0, 0, v3);
  EXPECT_EQ(d.support, std::vector<double>{11});
  EXPECT_EQ(d.probs, std::vector<double>{1.0});
}

TEST(OpponentDistributionTest, MeanRescalesBySize) {
  const auto game = StaticGame({{1}, {3, 5}, {3, 5}}, Aggregator::kMean);
  const std::vector<std::vector<double>> p = {{1.0}, {0.5, 0.5}, {0.5, 0.5}};
  const auto views = Views(p);
  const auto d = OpponentAggregateDistribution(game, 0, 0, 0, views);
  EXPECT_EQ(d.support, (std::vector<double>{3, 4, 5}));
}

TEST(OpponentDistributionTest, RejectsUnnormalizedPolicy) {
  const auto game = StaticGame({{1}, {3, 5}}, Aggregator::kSum);
  const std::vector<std::vector<double>> p = {{1.0}, {0.5, 0.49}};
  const auto views = Views(p);
  EXPECT_THROW(OpponentAggregateDistribution(game, 0, 0, 0, views), Error);
}

TEST(ExpectedStageValueTest, FishermenExamples) {
  const auto game = MakeFishermenGame();
  const std::vector<std::vector<double>> many = {{1, 0}, {1, 0}};
  const auto vm = Views(many);
  // Last step, both fish intensively: raw 10 each.
  const double v = ExpectedStageValue(game, 1, kFishermenHigh, 0, vm, {});
  EXPECT_NEAR(game.reward_scale().ToRaw(v), 10.0, 1e-12);

  const std::vector<std::vector<double>> uniform = {{0.5, 0.5}, {0.5, 0.5}};
  const auto vu = Views(uniform);
  const std::vector<double> zero = {0.0, 0.0};
  const auto q = StageActionValues(game, 0, kFishermenHigh, 0, vu, zero);
  const double value = 0.5 * q[0] + 0.5 * q[1];
  EXPECT_NEAR(game.reward_scale().ToRaw(value), (10 + 18 + 3 + 9) / 4.0, 1e-12);
}

TEST(ExpectedStageValueTest, DegeneratePolicyIsRewardPlusContinuation) {
  const auto game = RandomAmg({.seed = 4, .horizon = 2, .num_agents = 3,
                               .num_states = 3, .num_actions = 2});
  const std::vector<std::vector<double>> p = {{0, 1}, {1, 0}, {0, 1}};
  const auto views = Views(p);
  const std::vector<double> cont = {0.3, 1.1, 0.7};
  const std::vector<int> joint = {1, 0, 1};
  double g = 0.0;
  for (int j = 0; j < 3; ++j) g += game.action_value(0, 1, j, joint[j]);
  const auto next = game.Transition(0, 1, joint);
  double expected = game.Reward(0, 1, 2, 1, g);
  for (int x = 0; x < 3; ++x) expected += next[x] * cont[x];
  EXPECT_NEAR(ExpectedStageValue(game, 0, 1, 2, views, cont), expected, 1e-14);
}

// Random profile with full support.
std::vector<std::vector<double>> RandomProfile(const AggregativeMarkovGame& game,
                                               int t, int s, Rng& rng) {
  std::vector<std::vector<double>> p;
  for (int j = 0; j < game.num_agents(); ++j) {
    std::vector<double> row;
    double total = 0.0;
    for (int a = 0; a < game.num_actions(t, s, j); ++a) {
      row.push_back(0.05 + rng.Uniform01());
      total += row.back();
    }
    for (double& x : row) x /= total;
    p.push_back(row);
  }
  return p;
}

TEST(ExpectedStageValueTest, ConvolutionMatchesJointEnumeration) {
  Rng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 4;
    const auto game = RandomAmg({.seed = static_cast<std::uint64_t>(trial),
                                 .horizon = 2, .num_agents = n,
                                 .num_states = 2, .num_actions = 1 + trial % 3});
    for (int t = 0; t < 2; ++t) {
      const auto p = RandomProfile(game, t, 0, rng);
      const auto views = Views(p);
      const std::vector<double> cont = {rng.Uniform01(), rng.Uniform01()};
      for (int i = 0; i < n; ++i) {
        const auto fast = StageActionValues(game, t, 0, i, views, cont);
        const auto slow = oracle::StageActionValues(game, t, 0, i, p, cont);
        ASSERT_EQ(fast.size(), slow.size());
        for (std::size_t a = 0; a < fast.size(); ++a) {
          EXPECT_NEAR(fast[a], slow[a], 1e-10);
        }
      }
    }
  }
}

TEST(ExpectedStageValueTest, JointTransitionsUseEnumeration) {
  const auto game = RandomAmg({.seed = 8, .horizon = 2, .num_agents = 3,
                               .num_states = 2, .num_actions = 2,
                               .aggregate_dependent = false});
  EXPECT_FALSE(game.aggregate_dependent());
  Rng rng(5);
  const auto p = RandomProfile(game, 0, 1, rng);
  const auto views = Views(p);
  const std::vector<double> cont = {0.25, 0.9};
  const auto fast = StageActionValues(game, 0, 1, 1, views, cont);
  const auto slow = oracle::StageActionValues(game, 0, 1, 1, p, cont);
  for (std::size_t a = 0; a < fast.size(); ++a) EXPECT_NEAR(fast[a], slow[a], 1e-12);
}

TEST(ExpectedStageValueTest, LinearInContinuation) {
  const auto game = RandomAmg({.seed = 21, .horizon = 2, .num_agents = 3,
                               .num_states = 3, .num_actions = 3});
  Rng rng(3);
  const auto p = RandomProfile(game, 0, 2, rng);
  const auto views = Views(p);
  const std::vector<double> zero(3, 0.0);
  const double base = ExpectedStageValue(game, 0, 2, 0, views, zero);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> u(3), w(3), mix(3);
    const double alpha = rng.Uniform01() * 4 - 2, beta = rng.Uniform01() * 4 - 2;
    for (int x = 0; x < 3; ++x) {
      u[x] = rng.Uniform01();
      w[x] = rng.Uniform01();
      mix[x] = alpha * u[x] + beta * w[x];
    }
    const double fu = ExpectedStageValue(game, 0, 2, 0, views, u) - base;
    const double fw = ExpectedStageValue(game, 0, 2, 0, views, w) - base;
    const double fm = ExpectedStageValue(game, 0, 2, 0, views, mix) - base;
    EXPECT_NEAR(fm, alpha * fu + beta * fw, 1e-12);
  }
}

TEST(ExpectedStageValueTest, DistributionsSumToOne) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto game = RandomAmg({.seed = static_cast<std::uint64_t>(100 + trial),
                                 .horizon = 1, .num_agents = 1 + trial % 5,
                                 .num_states = 1, .num_actions = 3});
    const auto p = RandomProfile(game, 0, 0, rng);
    const auto views = Views(p);
    const auto d = OpponentSumDistribution(game, 0, 0, 0, views);
    EXPECT_NEAR(d.TotalMass(), 1.0, 1e-12);
    EXPECT_TRUE(std::is_sorted(d.support.begin(), d.support.end()));
    EXPECT_EQ(std::adjacent_find(d.support.begin(), d.support.end()), d.support.end());
  }
}

TEST(ExpectedStageValueTest, JointGuard) {
  AggregativeMarkovGame::Definition def;
  def.horizon = 2;
  def.num_agents = 21;
  def.num_states = {1, 1};
  def.action_values.assign(2, {std::vector<std::vector<double>>(21, {1, 2})});
  def.raw_reward = [](int, int, int, int, double) { return 0.5; };
  def.joint_transition = [](int, int, std::span<const int>) {
    return std::vector<double>{1.0};
  };
  def.initial_distribution = {1.0};
  const AggregativeMarkovGame game(def);
  const std::vector<std::vector<double>> p(21, {0.5, 0.5});
  const auto views = Views(p);
  try {
    StageActionValues(game, 0, 0, 0, views, std::vector<double>{0.0});
    FAIL() << "expected the joint-space guard";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "joint space too large; transition not aggregate-dependent");
  }
}

TEST(GameTest, ValidationRejectsBadTables) {
  AggregativeMarkovGame::Definition def;
  def.horizon = 2;
  def.num_agents = 1;
  def.num_states = {1, 2};
  def.action_values = {{{{1, 2}}}, {{{1}}, {{1}}}};
  def.raw_reward = [](int, int, int, int, double) { return 0.5; };
  def.aggregate_transition = [](int, int, double) {
    return std::vector<double>{0.5, 0.4};
  };
  def.initial_distribution = {1.0};
  EXPECT_THROW(AggregativeMarkovGame{def}, Error);
  def.aggregate_transition = [](int, int, double) {
    return std::vector<double>{0.5, 0.5};
  };
  EXPECT_NO_THROW(AggregativeMarkovGame{def});
  def.raw_reward = [](int, int, int, int, double) { return 1.5; };
  EXPECT_THROW(AggregativeMarkovGame{def}, Error);
  def.raw_reward = [](int, int, int, int, double) { return 0.5; };
  def.action_values[0][0][0].clear();
  EXPECT_THROW(AggregativeMarkovGame{def}, Error);
}

TEST(GameTest, RewardScaleRoundTrip) {
  const RewardScale scale{2.0, 16.0};
  EXPECT_DOUBLE_EQ(scale.ToNormalized(18.0), 1.0);
  EXPECT_DOUBLE_EQ(scale.ToNormalized(2.0), 0.0);
  EXPECT_DOUBLE_EQ(scale.ToRaw(scale.ToNormalized(9.0)), 9.0);
}

}  // namespace
}  // namespace asvl
