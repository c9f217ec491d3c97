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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "asvl/envs.h"
#include "json.hpp"

namespace asvl {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Error KeyError(const std::string& key, const std::string& why) {
  return Error("invalid value for '" + key + "': " + why);
}

double ToDouble(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument("");
    return v;
  } catch (const std::logic_error&) {
    throw KeyError(key, "expected a number, got '" + value + "'");
  }
}

long long ToInteger(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::logic_error&) {
    throw KeyError(key, "expected an integer, got '" + value + "'");
  }
}

bool ToBool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw KeyError(key, "expected a boolean, got '" + value + "'");
}

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string Opt(const std::optional<double>& v) {
  return v ? Num(*v) : "auto";
}

// Runs work(i) for i in [0, n) on up to `threads` workers.
template <typename F>
void ParallelFor(int n, int threads, F work) {
  if (threads <= 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = std::min(threads, n);
  std::atomic<int> next{0};
  std::mutex error_mu;
  std::exception_ptr error;
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        work(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

class CentralizedSession : public Session {
 public:
  CentralizedSession(const AggregativeMarkovGame& game, QLearningConfig config,
                     std::uint64_t seed)
      : learner_(game, config),
        env_rng_(DeriveSeed(seed, StreamPurpose::kEnvironment)),
        rng_(DeriveSeed(seed, StreamPurpose::kBaseline, 0)) {}

  EpisodeReturns RunEpisode() override {
    return learner_.RunEpisode(++episodes_, env_rng_, rng_);
  }

 private:
  CentralizedQ learner_;
  Rng env_rng_;
  Rng rng_;
};

class IndependentSession : public Session {
 public:
  IndependentSession(const AggregativeMarkovGame& game, QLearningConfig config,
                     std::uint64_t seed)
      : learner_(game, config),
        env_rng_(DeriveSeed(seed, StreamPurpose::kEnvironment)) {
    for (int i = 0; i < game.num_agents(); ++i) {
      rngs_.emplace_back(DeriveSeed(seed, StreamPurpose::kBaseline, i));
    }
  }

  EpisodeReturns RunEpisode() override {
    return learner_.RunEpisode(++episodes_, env_rng_, rngs_);
  }

 private:
  IndependentQ learner_;
  Rng env_rng_;
  std::vector<Rng> rngs_;
};

std::filesystem::path SeedFile(const RunConfig& config, const char* stem,
                               std::uint64_t seed) {
  return std::filesystem::path(config.out) /
         (std::string(stem) + "_" + std::to_string(seed) + ".csv");
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("invalid value for 'out': cannot write " + path.string());
  return out;
}

void PrepareOutputDir(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec || !std::filesystem::is_directory(config.out)) {
    throw IoError("invalid value for 'out': cannot create directory " + config.out);
  }
}

std::vector<int> CertificationPoints(const RunConfig& config, int episodes) {
  std::vector<int> points = config.checkpoints;
  if (points.empty()) points.push_back(episodes);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

GapCertificate Certify(const RunConfig& config, const PolicySnapshotStore& store,
                       const AggregativeMarkovGame& game) {
  return ComputeGapCertificate(store, game, config.initial_state);
}

SeedSummary RunSeed(const RunConfig& config, const AggregativeMarkovGame& game,
                    std::uint64_t seed) {
  const int K = config.episodes;
  const int n = game.num_agents();
  auto session = MakeSession(config, game, seed, K);
  const auto points = CertificationPoints(config, K);
  std::size_t next_point = 0;

  auto rewards = OpenOutput(SeedFile(config, "rewards", seed));
  rewards << "episode,agent,raw_return,ma500\n";
  std::ofstream stages;
  if (config.algo == Algorithm::kAsvl) {
    stages = OpenOutput(SeedFile(config, "stages", seed));
    stages << "t,state,stage_index,length,lambda\n";
  }

  SeedSummary summary;
  summary.seed = seed;
  summary.final_mean_returns.assign(n, 0.0);
  const int tail_start = K - std::max(K / 10, 1) + 1;
  std::vector<std::deque<double>> windows(n);
  std::vector<double> window_sums(n, 0.0);
  for (int k = 1; k <= K; ++k) {
    const EpisodeReturns ret = session->RunEpisode();
    for (int i = 0; i < n; ++i) {
      windows[i].push_back(ret.raw[i]);
      window_sums[i] += ret.raw[i];
      if (static_cast<int>(windows[i].size()) > kMovingAverageWindow) {
        window_sums[i] -= windows[i].front();
        windows[i].pop_front();
      }
      rewards << k << ',' << i << ',' << Num(ret.raw[i]) << ','
              << Num(window_sums[i] / windows[i].size()) << '\n';
      if (k >= tail_start) summary.final_mean_returns[i] += ret.raw[i];
    }
    for (const StageEnd& e : session->TakeStageEvents()) {
      stages << e.t << ',' << e.s << ',' << e.stage_index << ',' << e.length
             << ',' << Num(e.lambda) << '\n';
    }
    while (next_point < points.size() && points[next_point] == k) {
      if (const PolicySnapshotStore* store = session->store()) {
        const GapCertificate cert = Certify(config, *store, game);
        for (const auto& a : cert.agents) summary.certificates.push_back({seed, k, a});
      }
      ++next_point;
    }
  }
  for (double& v : summary.final_mean_returns) v /= K - tail_start + 1;
  if (config.save_store && session->store()) {
    std::ofstream out = OpenOutput(std::filesystem::path(config.out) /
                                   ("store_" + std::to_string(seed) + ".txt"));
    session->store()->Write(out);
  }
  if (!rewards || (stages.is_open() && !stages)) {
    throw IoError("invalid value for 'out': write failed");
  }
  return summary;
}

void WriteCertificates(std::ostream& out, const std::vector<CertificateRow>& rows) {
  for (const auto& r : rows) {
    out << r.seed << ',' << r.episodes << ',' << r.agent.agent << ','
        << Num(r.agent.value) << ',' << Num(r.agent.br_upper) << ','
        << Num(r.agent.gap) << '\n';
  }
}

}  // namespace

std::string AlgorithmName(Algorithm algo) {
  switch (algo) {
    case Algorithm::kAsvl: return "asvl";
    case Algorithm::kCentralizedQ: return "centralized-q";
    case Algorithm::kIndependentQ: return "independent-q";
  }
  return "?";
}

Algorithm ParseAlgorithm(const std::string& name) {
  if (name == "asvl") return Algorithm::kAsvl;
  if (name == "centralized-q") return Algorithm::kCentralizedQ;
  if (name == "independent-q") return Algorithm::kIndependentQ;
  throw Error("unknown algorithm: " + name);
}

std::vector<std::uint64_t> ParseSeedList(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    const auto dash = item.find('-', 1);
    if (dash != std::string::npos) {
      const long long lo = ToInteger("seeds", item.substr(0, dash));
      const long long hi = ToInteger("seeds", item.substr(dash + 1));
      if (lo < 0 || hi < lo) throw KeyError("seeds", "bad range '" + item + "'");
      for (long long s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      const long long s = ToInteger("seeds", item);
      if (s < 0) throw KeyError("seeds", "seeds must be nonnegative");
      seeds.push_back(s);
    }
  }
  if (seeds.empty()) throw KeyError("seeds", "empty seed list");
  return seeds;
}

void RunConfig::Set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = Trim(raw_key);
  const std::string value = Trim(raw_value);
  auto positive = [&](double v) {
    if (!(v > 0.0)) throw KeyError(key, "must be positive");
    return v;
  };
  // "auto" restores a game-dependent default.
  auto optional = [&](auto parse) -> std::optional<double> {
    if (value == "auto") return std::nullopt;
    return parse(ToDouble(key, value));
  };
  auto any = [](double v) { return v; };
  if (key == "env") {
    if (value.empty()) throw KeyError(key, "empty");
    env = value;
  } else if (key == "episodes") {
    const long long v = ToInteger(key, value);
    if (v < 1 || v > std::numeric_limits<int>::max()) throw KeyError(key, "must be >= 1");
    episodes = static_cast<int>(v);
  } else if (key == "seed" || key == "seeds") {
    try {
      seeds = ParseSeedList(value);
    } catch (const Error&) {
      throw KeyError(key, "expected seeds like '3', '1,2' or '1-20'");
    }
  } else if (key == "algo") {
    try {
      algo = ParseAlgorithm(value);
    } catch (const Error& e) {
      throw KeyError(key, e.what());
    }
  } else if (key == "fluctuation") {
    try {
      fluctuation = ParseFluctuationMode(value);
    } catch (const Error& e) {
      throw KeyError(key, e.what());
    }
  } else if (key == "lambda-min") {
    lambda_min = optional(any);
  } else if (key == "cv-max") {
    cv_max = optional(positive);
  } else if (key == "mad-max") {
    mad_max = optional(positive);
  } else if (key == "iota") {
    iota = optional(positive);
  } else if (key == "p") {
    p = ToDouble(key, value);
    if (!(p > 0.0 && p <= 1.0)) throw KeyError(key, "must lie in (0, 1]");
  } else if (key == "bonus-scale") {
    bonus_scale = positive(ToDouble(key, value));
  } else if (key == "epsilon-end") {
    epsilon_end = ToDouble(key, value);
    if (!(epsilon_end >= 0.0 && epsilon_end <= 1.0)) {
      throw KeyError(key, "must lie in [0, 1]");
    }
  } else if (key == "checkpoints") {
    checkpoints.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const long long v = ToInteger(key, Trim(item));
      if (v < 1 || v > std::numeric_limits<int>::max()) throw KeyError(key, "must be >= 1");
      checkpoints.push_back(static_cast<int>(v));
    }
  } else if (key == "out") {
    if (value.empty()) throw KeyError(key, "empty");
    out = value;
  } else if (key == "compact-store") {
    compact_store = ToBool(key, value);
  } else if (key == "log-samples") {
    log_samples = ToBool(key, value);
  } else if (key == "save-store") {
    save_store = ToBool(key, value);
  } else if (key == "initial-state") {
    if (value == "auto") {
      initial_state.reset();
    } else {
      const long long v = ToInteger(key, value);
      if (v < 0) throw KeyError(key, "must be >= 0");
      initial_state = static_cast<int>(v);
    }
  } else if (key == "threads") {
    const long long v = ToInteger(key, value);
    if (v < 0 || v > 1024) throw KeyError(key, "must lie in [0, 1024]");
    threads = static_cast<int>(v);
  } else {
    throw Error("unknown configuration key '" + key + "'");
  }
}

void RunConfig::Validate() const {
  if (episodes < 1) throw KeyError("episodes", "must be >= 1");
  if (seeds.empty()) throw KeyError("seeds", "empty seed list");
  if (!(p > 0.0 && p <= 1.0)) throw KeyError("p", "must lie in (0, 1]");
  if (!(bonus_scale > 0.0)) throw KeyError("bonus-scale", "must be positive");
  if (!(epsilon_end >= 0.0 && epsilon_end <= 1.0)) {
    throw KeyError("epsilon-end", "must lie in [0, 1]");
  }
  for (const auto& [key, v] : {std::pair{"cv-max", cv_max}, std::pair{"mad-max", mad_max},
                               std::pair{"iota", iota}}) {
    if (v && !(*v > 0.0)) throw KeyError(key, "must be positive");
  }
  if (initial_state && *initial_state < 0) throw KeyError("initial-state", "must be >= 0");
  if (threads < 0) throw KeyError("threads", "must be >= 0");
  for (int c : checkpoints) {
    if (c < 1 || c > episodes) {
      throw KeyError("checkpoints", "checkpoint " + std::to_string(c) +
                                        " outside [1, episodes]");
    }
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::Items() const {
  std::string seed_text, checkpoint_text;
  for (auto s : seeds) seed_text += (seed_text.empty() ? "" : ",") + std::to_string(s);
  for (int c : checkpoints) {
    checkpoint_text += (checkpoint_text.empty() ? "" : ",") + std::to_string(c);
  }
  return {
      {"env", env},
      {"episodes", std::to_string(episodes)},
      {"seeds", seed_text},
      {"algo", AlgorithmName(algo)},
      {"fluctuation", FluctuationModeName(fluctuation)},
      {"lambda-min", Opt(lambda_min)},
      {"cv-max", Opt(cv_max)},
      {"mad-max", Opt(mad_max)},
      {"iota", Opt(iota)},
      {"p", Num(p)},
      {"bonus-scale", Num(bonus_scale)},
      {"epsilon-end", Num(epsilon_end)},
      {"checkpoints", checkpoint_text},
      {"out", out},
      {"compact-store", compact_store ? "true" : "false"},
      {"log-samples", log_samples ? "true" : "false"},
      {"save-store", save_store ? "true" : "false"},
      {"initial-state", initial_state ? std::to_string(*initial_state) : "auto"},
  };
}

std::map<std::string, std::string> ParseKeyValueText(std::istream& in) {
  std::map<std::string, std::string> items;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("config line " + std::to_string(number) + ": expected key = value");
    }
    items[Trim(line.substr(0, eq))] = Trim(line.substr(eq + 1));
  }
  return items;
}

LearnerConfig ResolveLearnerConfig(const RunConfig& config,
                                   const AggregativeMarkovGame& game,
                                   int episodes) {
  LearnerConfig learner;
  learner.bonus_scale = config.bonus_scale;
  learner.iota = config.iota ? *config.iota : DefaultIota(game, episodes, config.p);
  learner.fluctuation.mode = config.fluctuation;
  learner.fluctuation.lambda_min =
      config.lambda_min ? *config.lambda_min : DefaultLambdaMin(game.horizon());
  learner.fluctuation.cv_max = config.cv_max.value_or(0.5);
  if (config.mad_max) {
    learner.fluctuation.mad_max = *config.mad_max;
  } else {
    const auto [lo, hi] = game.AggregateRange();
    learner.fluctuation.mad_max = hi > lo ? (hi - lo) / 2 : 1.0;
  }
  try {
    learner.Validate(game.horizon());
  } catch (const Error& e) {
    const std::string what = e.what();
    const std::string key = what.rfind("lambda", 0) == 0 ? "lambda-min"
                            : what.rfind("cv", 0) == 0   ? "cv-max"
                            : what.rfind("mad", 0) == 0  ? "mad-max"
                            : what.rfind("iota", 0) == 0 ? "iota"
                                                         : "bonus-scale";
    throw KeyError(key, what);
  }
  return learner;
}

std::unique_ptr<Session> MakeSession(const RunConfig& config,
                                     const AggregativeMarkovGame& game,
                                     std::uint64_t seed, int planned_episodes) {
  QLearningConfig q;
  q.episodes = planned_episodes;
  q.epsilon_end = config.epsilon_end;
  switch (config.algo) {
    case Algorithm::kAsvl:
      return std::make_unique<AsvlSession>(
          game, ResolveLearnerConfig(config, game, planned_episodes), seed,
          StoreOptions{config.compact_store, config.log_samples});
    case Algorithm::kCentralizedQ:
      return std::make_unique<CentralizedSession>(game, q, seed);
    case Algorithm::kIndependentQ:
      return std::make_unique<IndependentSession>(game, q, seed);
  }
  throw Error("unknown algorithm");
}

AsvlSession::AsvlSession(const AggregativeMarkovGame& game,
                         LearnerConfig learner, std::uint64_t seed,
                         StoreOptions options)
    : game_(game),
      store_(game, options),
      env_rng_(DeriveSeed(seed, StreamPurpose::kEnvironment)) {
  if (learner.fluctuation.mode != FluctuationMode::kNone &&
      !game.requires_positive_aggregates()) {
    throw Error("fluctuation estimators need a game with positive aggregates");
  }
  std::vector<int> max_actions;
  for (int i = 0; i < game.num_agents(); ++i) {
    learners_.emplace_back(game, i, learner);
    agent_rngs_.emplace_back(DeriveSeed(seed, StreamPurpose::kAgentAction, i));
    max_actions.push_back(learners_.back().max_actions());
  }
  store_.SetLearnerParameters(learner.iota, learner.bonus_scale, max_actions);
}

EpisodeReturns AsvlSession::RunEpisode() {
  const int k = ++episodes_;
  const int T = game_.horizon(), n = game_.num_agents();
  EpisodeReturns out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  std::vector<std::vector<double>> policies(n);
  std::vector<PolicyView> profile(n);
  std::vector<int> joint(n);
  std::vector<double> values(n), rewards(n), upper(n);
  int s = SampleCategorical(game_.initial_distribution(), env_rng_);
  for (int t = 0; t < T; ++t) {
    // Every agent sees only (t, s); the snapshot is the policy it draws from.
    for (int i = 0; i < n; ++i) {
      const PolicyView pi = learners_[i].Policy(t, s);
      policies[i].assign(pi.begin(), pi.end());
      profile[i] = policies[i];
      joint[i] = learners_[i].Step(t, s, agent_rngs_[i]);
      values[i] = game_.action_value(t, s, i, joint[i]);
    }
    const int stage = learners_[0].state(t, s).stage_index;
    store_.RecordVisit(t, s, k, stage, profile);
    const double g = Aggregate(values, game_.aggregator());
    for (int i = 0; i < n; ++i) rewards[i] = game_.Reward(t, s, i, joint[i], g);
    const int next =
        t + 1 < T ? SampleCategorical(game_.Transition(t, s, joint), env_rng_) : -1;
    store_.RecordSample(t, s, joint, next, rewards);
    std::optional<StageEnd> ended;
    int ends = 0;
    for (int i = 0; i < n; ++i) {
      auto e = learners_[i].Observe(t, s, joint[i], rewards[i], next, g);
      if (e) {
        ++ends;
        if (!ended) ended = e;
      }
      out.normalized[i] += rewards[i];
      out.raw[i] += game_.reward_scale().ToRaw(rewards[i]);
    }
    if (ends != 0 && ends != n) throw Error("agents' stages fell out of step");
    if (ended) {
      for (int i = 0; i < n; ++i) upper[i] = learners_[i].UpperValue(t, s);
      store_.RecordStageEnd(t, s, k, upper);
      events_.push_back(*ended);
    }
    s = next;
  }
  store_.FinishEpisode(k);
  return out;
}

std::vector<StageEnd> AsvlSession::TakeStageEvents() {
  std::vector<StageEnd> out;
  out.swap(events_);
  return out;
}

RunSummary Run(const RunConfig& config) {
  config.Validate();
  const AggregativeMarkovGame game = MakeEnvironment(config.env);
  // Fail on bad learner settings before touching the disk.
  if (config.algo == Algorithm::kAsvl) {
    ResolveLearnerConfig(config, game, config.episodes);
  }
  PrepareOutputDir(config);
  RunSummary summary;
  summary.approximate = config.compact_store;
  summary.seeds.resize(config.seeds.size());
  ParallelFor(static_cast<int>(config.seeds.size()), config.threads, [&](int i) {
    summary.seeds[i] = RunSeed(config, game, config.seeds[i]);
  });

  if (config.algo == Algorithm::kAsvl) {
    auto out = OpenOutput(std::filesystem::path(config.out) / "certificates.csv");
    out << "seed,K,agent,value,br_upper,gap\n";
    for (const auto& seed : summary.seeds) WriteCertificates(out, seed.certificates);
  }

  nlohmann::ordered_json manifest;
  manifest["tool"] = "asvl";
  manifest["version"] = "0.1.0";
  manifest["game"] = game.name();
  for (const auto& [key, value] : config.Items()) manifest["config"][key] = value;
  manifest["certification"] = config.algo != Algorithm::kAsvl ? "none"
                              : config.compact_store         ? "approximate"
                                                             : "exact";
  auto out = OpenOutput(std::filesystem::path(config.out) / "run.json");
  out << manifest.dump(2) << '\n';
  return summary;
}

SweepResult Sweep(const RunConfig& config, const std::vector<int>& grid) {
  if (grid.empty()) throw KeyError("grid", "empty grid");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (grid[j] < 1 || (j > 0 && grid[j] <= grid[j - 1])) {
      throw KeyError("grid", "episode counts must be positive and increasing");
    }
  }
  if (config.algo != Algorithm::kAsvl) {
    throw KeyError("algo", "sweeps certify ASVL runs only");
  }
  RunConfig base = config;
  base.episodes = grid.back();
  base.checkpoints.clear();
  base.Validate();
  const AggregativeMarkovGame game = MakeEnvironment(config.env);
  for (int K : grid) ResolveLearnerConfig(config, game, K);
  PrepareOutputDir(config);

  const int num_seeds = static_cast<int>(config.seeds.size());
  const int cells = num_seeds * static_cast<int>(grid.size());
  std::vector<GapCertificate> certs(cells);
  ParallelFor(cells, config.threads, [&](int cell) {
    const std::uint64_t seed = config.seeds[cell / grid.size()];
    const int K = grid[cell % grid.size()];
    auto session = MakeSession(config, game, seed, K);
    for (int k = 0; k < K; ++k) session->RunEpisode();
    certs[cell] = Certify(config, *session->store(), game);
  });

  SweepResult result;
  result.grid = grid;
  auto out = OpenOutput(std::filesystem::path(config.out) / "sweep.csv");
  out << "seed,K,agent,value,br_upper,gap\n";
  for (int cell = 0; cell < cells; ++cell) {
    std::vector<CertificateRow> rows;
    for (const auto& a : certs[cell].agents) {
      rows.push_back({config.seeds[cell / grid.size()], grid[cell % grid.size()], a});
    }
    WriteCertificates(out, rows);
  }
  std::vector<double> xs;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    std::vector<double> gaps;
    for (int i = 0; i < num_seeds; ++i) gaps.push_back(certs[i * grid.size() + j].gap);
    result.median_gaps.push_back(Median(gaps));
    xs.push_back(grid[j]);
  }
  result.exponent = grid.size() < 2 ? std::numeric_limits<double>::quiet_NaN()
                                    : LogLogSlope(xs, result.median_gaps);
  auto summary = OpenOutput(std::filesystem::path(config.out) / "sweep_summary.csv");
  summary << "K,median_gap\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    summary << grid[j] << ',' << Num(result.median_gaps[j]) << '\n';
  }
  summary << "# exponent," << Num(result.exponent) << '\n';
  return result;
}

double LogLogSlope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("need two or more points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw Error("log-log fit needs positive data");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double Median(std::vector<double> values) {
  if (values.empty()) throw Error("median of nothing");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace asvl
