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

#ifndef ASVL_HARNESS_H_
#define ASVL_HARNESS_H_

#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "asvl/baselines.h"
#include "asvl/certify.h"
#include "asvl/fluctuation.h"
#include "asvl/game.h"
#include "asvl/learner.h"
#include "asvl/rng.h"
#include "asvl/snapshot_store.h"

namespace asvl {

enum class Algorithm { kAsvl, kCentralizedQ, kIndependentQ };

std::string AlgorithmName(Algorithm algo);
Algorithm ParseAlgorithm(const std::string& name);

inline constexpr int kMovingAverageWindow = 500;

struct RunConfig {
  std::string env = "fishermen";
  int episodes = 1000;
  std::vector<std::uint64_t> seeds = {0};
  Algorithm algo = Algorithm::kAsvl;
  FluctuationMode fluctuation = FluctuationMode::kCv;
  // Unset values take game-dependent defaults; see ResolveLearnerConfig.
  std::optional<double> lambda_min;
  std::optional<double> cv_max;
  std::optional<double> mad_max;
  std::optional<double> iota;
  double p = 0.05;
  double bonus_scale = 4.0;
  double epsilon_end = 0.05;
  std::vector<int> checkpoints;  // certify at these episodes (default: K)
  std::string out = "out";
  bool compact_store = false;
  bool log_samples = false;
  bool save_store = false;
  // Certify at this initial state instead of weighting by rho.
  std::optional<int> initial_state;
  int threads = 0;  // 0: one per hardware thread

  // Sets one field from its flag name ("lambda-min", ...). Failures name the
  // key.
  void Set(const std::string& key, const std::string& value);
  // Checks everything that does not need the game.
  void Validate() const;
  // Flag-name/value pairs, in a fixed order.
  std::vector<std::pair<std::string, std::string>> Items() const;
};

// Flat "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> ParseKeyValueText(std::istream& in);

// Seeds from "3", "1,2,5" or "1-20".
std::vector<std::uint64_t> ParseSeedList(const std::string& text);

LearnerConfig ResolveLearnerConfig(const RunConfig& config,
                                   const AggregativeMarkovGame& game,
                                   int episodes);

// One seeded learning run of any algorithm; episodes advance one at a time.
class Session {
 public:
  virtual ~Session() = default;
  virtual EpisodeReturns RunEpisode() = 0;
  int episodes() const { return episodes_; }
  // Only ASVL records snapshots.
  virtual const PolicySnapshotStore* store() const { return nullptr; }
  // Stage boundaries since the last call (ASVL only).
  virtual std::vector<StageEnd> TakeStageEvents() { return {}; }

 protected:
  int episodes_ = 0;
};

// `planned_episodes` fixes K for the exploration schedule and the default
// iota. The game must outlive the session.
std::unique_ptr<Session> MakeSession(const RunConfig& config,
                                     const AggregativeMarkovGame& game,
                                     std::uint64_t seed, int planned_episodes);

// Decentralized ASVL run: N learners, a shared snapshot store, and separate
// streams for the environment and every agent.
class AsvlSession : public Session {
 public:
  AsvlSession(const AggregativeMarkovGame& game, LearnerConfig learner,
              std::uint64_t seed, StoreOptions options);

  EpisodeReturns RunEpisode() override;
  const PolicySnapshotStore* store() const override { return &store_; }
  std::vector<StageEnd> TakeStageEvents() override;
  const VLearner& learner(int agent) const { return learners_.at(agent); }

 private:
  const AggregativeMarkovGame& game_;
  std::vector<VLearner> learners_;
  PolicySnapshotStore store_;
  Rng env_rng_;
  std::vector<Rng> agent_rngs_;
  std::vector<StageEnd> events_;
};

struct CertificateRow {
  std::uint64_t seed = 0;
  int episodes = 0;
  AgentCertificate agent;
};

struct SeedSummary {
  std::uint64_t seed = 0;
  // Mean raw return per agent over the final 10% of episodes.
  std::vector<double> final_mean_returns;
  std::vector<CertificateRow> certificates;
};

struct RunSummary {
  std::vector<SeedSummary> seeds;
  bool approximate = false;
};

// Runs every seed (concurrently) and writes rewards_<seed>.csv,
// stages_<seed>.csv, certificates.csv and run.json under config.out.
RunSummary Run(const RunConfig& config);

struct SweepResult {
  std::vector<int> grid;
  std::vector<double> median_gaps;
  double exponent = 0.0;  // least-squares slope of log gap on log K; NaN
                          // for a single K
};

// Fresh runs for every (seed, K); writes sweep.csv and sweep_summary.csv.
SweepResult Sweep(const RunConfig& config, const std::vector<int>& grid);

// Least-squares slope of log(y) against log(x).
double LogLogSlope(const std::vector<double>& x, const std::vector<double>& y);
double Median(std::vector<double> values);

}  // namespace asvl

#endif  // ASVL_HARNESS_H_
