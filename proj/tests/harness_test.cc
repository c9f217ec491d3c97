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

#include "asvl/harness.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "asvl/envs.h"

namespace asvl {
namespace {

namespace fs = std::filesystem;

fs::path ScratchDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("asvl_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> Csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

TEST(RunConfigTest, SetAndErrors) {
  RunConfig config;
  config.Set("episodes", "250");
  config.Set("lambda-min", "0.95");
  config.Set("fluctuation", "mad");
  config.Set("algo", "independent-q");
  config.Set("seeds", "3-5");
  config.Set("compact-store", "true");
  EXPECT_EQ(config.episodes, 250);
  EXPECT_EQ(config.lambda_min, 0.95);
  EXPECT_EQ(config.fluctuation, FluctuationMode::kMad);
  EXPECT_EQ(config.algo, Algorithm::kIndependentQ);
  EXPECT_EQ(config.seeds, (std::vector<std::uint64_t>{3, 4, 5}));
  EXPECT_TRUE(config.compact_store);
  try {
    config.Set("episodes", "many");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("'episodes'"), std::string::npos);
  }
  try {
    config.Set("temperature", "1");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("'temperature'"), std::string::npos);
  }
  EXPECT_THROW(config.Set("fluctuation", "variance"), Error);
}

TEST(RunConfigTest, ValidateNamesTheKey) {
  RunConfig config;
  config.episodes = 0;
  try {
    config.Validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("episodes"), std::string::npos);
  }
  config = RunConfig();
  config.p = 1.5;
  EXPECT_THROW(config.Validate(), Error);
  config = RunConfig();
  config.lambda_min = 0.2;  // below 1/(1+1/T)... and anything sensible
  const auto game = MakeFishermenGame();
  EXPECT_THROW(ResolveLearnerConfig(config, game, 100), Error);
}

TEST(RunConfigTest, KeyValueText) {
  std::istringstream in(
      "# comment\n"
      "episodes = 40\n"
      "  env=fishermen:initial=low   # trailing\n"
      "\n");
  const auto items = ParseKeyValueText(in);
  EXPECT_EQ(items.at("episodes"), "40");
  EXPECT_EQ(items.at("env"), "fishermen:initial=low");
  std::istringstream bad("episodes 40\n");
  EXPECT_THROW(ParseKeyValueText(bad), Error);
}

TEST(RunConfigTest, SeedLists) {
  EXPECT_EQ(ParseSeedList("7"), (std::vector<std::uint64_t>{7}));
  EXPECT_EQ(ParseSeedList("1,4"), (std::vector<std::uint64_t>{1, 4}));
  EXPECT_EQ(ParseSeedList("1-3"), (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_THROW(ParseSeedList("3-1"), Error);
  EXPECT_THROW(ParseSeedList(""), Error);
}

TEST(RunConfigTest, ItemsRoundTrip) {
  RunConfig config;
  config.Set("episodes", "17");
  config.Set("iota", "2.5");
  config.Set("initial-state", "1");
  RunConfig copy;
  for (const auto& [key, value] : config.Items()) copy.Set(key, value);
  EXPECT_EQ(copy.Items(), config.Items());
}

TEST(RunTest, SingleEpisode) {
  RunConfig config;
  config.episodes = 1;
  config.out = ScratchDir("single").string();
  const auto summary = asvl::Run(config);
  ASSERT_EQ(summary.seeds.size(), 1u);
  ASSERT_EQ(summary.seeds[0].certificates.size(), 2u);
  // Nothing has been certified yet after one episode.
  for (const auto& row : summary.seeds[0].certificates) {
    EXPECT_EQ(row.episodes, 1);
    EXPECT_DOUBLE_EQ(row.agent.value, 0.0);
    EXPECT_DOUBLE_EQ(row.agent.gap, 2.0);
  }
  const fs::path out = config.out;
  EXPECT_EQ(Csv(out / "rewards_0.csv").size(), 2u);
  EXPECT_TRUE(fs::exists(out / "stages_0.csv"));
  EXPECT_TRUE(fs::exists(out / "run.json"));
  EXPECT_EQ(Csv(out / "certificates.csv").size(), 2u);
}

TEST(RunTest, IsDeterministic) {
  RunConfig config;
  config.episodes = 600;
  config.seeds = {1, 2};
  config.checkpoints = {300, 600};
  config.out = ScratchDir("det_a").string();
  asvl::Run(config);
  const fs::path a = config.out;
  config.out = ScratchDir("det_b").string();
  config.threads = 1;
  asvl::Run(config);
  const fs::path b = config.out;
  for (const char* name : {"rewards_1.csv", "rewards_2.csv", "stages_1.csv",
                           "stages_2.csv", "certificates.csv"}) {
    EXPECT_EQ(Slurp(a / name), Slurp(b / name)) << name;
  }
  EXPECT_EQ(Csv(a / "certificates.csv").size(), 8u);
}

TEST(RunTest, MovingAverageWindow) {
  RunConfig config;
  config.episodes = kMovingAverageWindow + 20;
  config.algo = Algorithm::kIndependentQ;
  config.out = ScratchDir("ma").string();
  asvl::Run(config);
  const auto rows = Csv(fs::path(config.out) / "rewards_0.csv");
  EXPECT_FALSE(fs::exists(fs::path(config.out) / "stages_0.csv"));
  for (int agent = 0; agent < 2; ++agent) {
    std::vector<double> raw;
    for (const auto& r : rows) {
      if (std::stoi(r[1]) == agent) raw.push_back(std::stod(r[2]));
    }
    ASSERT_EQ(raw.size(), static_cast<std::size_t>(config.episodes));
    double sum = 0.0;
    for (int k = config.episodes - kMovingAverageWindow; k < config.episodes; ++k) sum += raw[k];
    const auto& last = rows[rows.size() - 2 + agent];
    EXPECT_NEAR(std::stod(last[3]), sum / kMovingAverageWindow, 1e-6);
  }
}

TEST(RunTest, StageLengthsFollowTheLaw) {
  for (FluctuationMode mode : {FluctuationMode::kCv, FluctuationMode::kMad,
                               FluctuationMode::kNone}) {
    RunConfig config;
    config.episodes = 3000;
    config.fluctuation = mode;
    config.out = ScratchDir("law").string();
    asvl::Run(config);
    const auto game = MakeFishermenGame();
    const double lambda_min = ResolveLearnerConfig(config, game, 3000).fluctuation.lambda_min;
    std::map<std::pair<int, int>, std::vector<std::pair<int, double>>> stages;
    for (const auto& r : Csv(fs::path(config.out) / "stages_0.csv")) {
      stages[{std::stoi(r[0]), std::stoi(r[1])}].push_back({std::stoi(r[3]), std::stod(r[4])});
    }
    ASSERT_FALSE(stages.empty());
    const double growth = 1.0 + 1.0 / game.horizon();
    for (const auto& [key, list] : stages) {
      for (std::size_t j = 0; j + 1 < list.size(); ++j) {
        const int L = list[j].first, next = list[j + 1].first;
        EXPECT_GE(next, std::max(static_cast<int>(std::floor(lambda_min * growth * L)), 1));
        EXPECT_LE(next, std::max(static_cast<int>(std::floor(growth * L)), 1));
        EXPECT_EQ(next, NextStageLength(list[j].second, game.horizon(), L));
      }
    }
  }
}

TEST(SweepTest, GridChecks) {
  RunConfig config;
  config.out = ScratchDir("sweep").string();
  EXPECT_THROW(Sweep(config, {}), Error);
  EXPECT_THROW(Sweep(config, {100, 50}), Error);
  config.algo = Algorithm::kCentralizedQ;
  EXPECT_THROW(Sweep(config, {100}), Error);
  config.algo = Algorithm::kAsvl;
  const auto single = Sweep(config, {50});
  EXPECT_TRUE(std::isnan(single.exponent));
  ASSERT_EQ(single.median_gaps.size(), 1u);
  EXPECT_GT(single.median_gaps[0], 0.0);
  EXPECT_TRUE(fs::exists(fs::path(config.out) / "sweep_summary.csv"));
}

TEST(SweepTest, TwoPointsGiveFiniteSlope) {
  RunConfig config;
  config.seeds = {0, 1, 2};
  config.out = ScratchDir("sweep2").string();
  const auto result = Sweep(config, {100, 400});
  EXPECT_TRUE(std::isfinite(result.exponent));
  EXPECT_NEAR(result.exponent, LogLogSlope({100, 400}, result.median_gaps), 1e-12);
}

TEST(StatsTest, SlopeAndMedian) {
  EXPECT_NEAR(LogLogSlope({1, 2, 4}, {1, 0.5, 0.25}), -1.0, 1e-12);
  EXPECT_THROW(LogLogSlope({1}, {1}), Error);
  EXPECT_DOUBLE_EQ(Median({3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(Median({4, 1, 2, 3}), 2.5);
}

}  // namespace
}  // namespace asvl
