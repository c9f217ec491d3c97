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

#include "asvl/asvl.h"

#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "asvl/certify.h"
#include "asvl/envs.h"
#include "asvl/game.h"
#include "asvl/harness.h"

struct asvl_game {
  std::unique_ptr<asvl::AggregativeMarkovGame> game;
};

struct asvl_config {
  asvl::RunConfig config;
};

struct asvl_session {
  std::unique_ptr<asvl::AggregativeMarkovGame> game;
  asvl::RunConfig config;
  std::unique_ptr<asvl::Session> session;
  std::vector<double> return_sums;
};

namespace {

thread_local std::string last_error;

asvl_status Fail(asvl_status status, const char* what) {
  last_error = what;
  return status;
}

template <typename F>
asvl_status Guard(F body) {
  try {
    body();
    last_error.clear();
    return ASVL_OK;
  } catch (const asvl::IoError& e) {
    return Fail(ASVL_ERR_IO, e.what());
  } catch (const asvl::Error& e) {
    return Fail(ASVL_ERR_INVALID, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(ASVL_ERR_NO_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return Fail(ASVL_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(ASVL_ERR_INTERNAL, "unknown failure");
  }
}

#define ASVL_REQUIRE(ptr)                                             \
  do {                                                                \
    if ((ptr) == nullptr) {                                           \
      return Fail(ASVL_ERR_NULL_ARGUMENT, #ptr " must not be NULL");  \
    }                                                                 \
  } while (0)

asvl_status CopyCertificate(const asvl::GapCertificate& cert,
                            asvl_agent_certificate* out, int capacity,
                            int* count) {
  const int n = static_cast<int>(cert.agents.size());
  *count = n;
  if (capacity < n) {
    return Fail(ASVL_ERR_BUFFER_TOO_SMALL, "certificate buffer too small");
  }
  for (int i = 0; i < n; ++i) {
    out[i] = {cert.agents[i].agent, cert.agents[i].value,
              cert.agents[i].br_upper, cert.agents[i].gap};
  }
  return ASVL_OK;
}

}  // namespace

extern "C" {

const char* asvl_version(void) { return "0.1.0"; }

const char* asvl_last_error(void) { return last_error.c_str(); }

const char* asvl_status_name(asvl_status status) {
  switch (status) {
    case ASVL_OK: return "ok";
    case ASVL_ERR_NULL_ARGUMENT: return "null argument";
    case ASVL_ERR_INVALID: return "invalid";
    case ASVL_ERR_IO: return "io";
    case ASVL_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case ASVL_ERR_NO_MEMORY: return "no memory";
    case ASVL_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

asvl_status asvl_game_create(const char* env, asvl_game** out) {
  ASVL_REQUIRE(env);
  ASVL_REQUIRE(out);
  *out = nullptr;
  return Guard([&] {
    auto handle = std::make_unique<asvl_game>();
    handle->game = std::make_unique<asvl::AggregativeMarkovGame>(
        asvl::MakeEnvironment(env));
    *out = handle.release();
  });
}

void asvl_game_destroy(asvl_game* game) { delete game; }

asvl_status asvl_game_horizon(const asvl_game* game, int* out) {
  ASVL_REQUIRE(game);
  ASVL_REQUIRE(out);
  *out = game->game->horizon();
  return ASVL_OK;
}

asvl_status asvl_game_num_agents(const asvl_game* game, int* out) {
  ASVL_REQUIRE(game);
  ASVL_REQUIRE(out);
  *out = game->game->num_agents();
  return ASVL_OK;
}

asvl_status asvl_game_num_states(const asvl_game* game, int t, int* out) {
  ASVL_REQUIRE(game);
  ASVL_REQUIRE(out);
  return Guard([&] { *out = game->game->num_states(t); });
}

asvl_status asvl_game_num_actions(const asvl_game* game, int t, int s,
                                  int agent, int* out) {
  ASVL_REQUIRE(game);
  ASVL_REQUIRE(out);
  return Guard([&] { *out = game->game->num_actions(t, s, agent); });
}

asvl_status asvl_fishermen_reward(int state, double own_effort,
                                  double total_effort, double* out) {
  ASVL_REQUIRE(out);
  return Guard(
      [&] { *out = asvl::FishermenReward(state, own_effort, total_effort); });
}

asvl_status asvl_fishermen_transition(int state, double total_effort,
                                      double* p_high, double* p_low) {
  ASVL_REQUIRE(p_high);
  ASVL_REQUIRE(p_low);
  return Guard([&] {
    const auto p = asvl::FishermenTransition(state, total_effort);
    *p_high = p[0];
    *p_low = p[1];
  });
}

asvl_status asvl_config_create(asvl_config** out) {
  ASVL_REQUIRE(out);
  return Guard([&] { *out = new asvl_config(); });
}

void asvl_config_destroy(asvl_config* config) { delete config; }

asvl_status asvl_config_set(asvl_config* config, const char* key,
                            const char* value) {
  ASVL_REQUIRE(config);
  ASVL_REQUIRE(key);
  ASVL_REQUIRE(value);
  return Guard([&] { config->config.Set(key, value); });
}

asvl_status asvl_config_load_file(asvl_config* config, const char* path) {
  ASVL_REQUIRE(config);
  ASVL_REQUIRE(path);
  return Guard([&] {
    std::ifstream in(path);
    if (!in) throw asvl::IoError(std::string("cannot open config file: ") + path);
    asvl::RunConfig updated = config->config;
    for (const auto& [key, value] : asvl::ParseKeyValueText(in)) {
      updated.Set(key, value);
    }
    config->config = updated;
  });
}

asvl_status asvl_run(const asvl_config* config) {
  ASVL_REQUIRE(config);
  return Guard([&] { asvl::Run(config->config); });
}

asvl_status asvl_sweep(const asvl_config* config, const int* grid,
                       int grid_size, double* exponent) {
  ASVL_REQUIRE(config);
  if (grid_size > 0) ASVL_REQUIRE(grid);
  return Guard([&] {
    std::vector<int> ks(grid, grid + (grid_size > 0 ? grid_size : 0));
    const auto result = asvl::Sweep(config->config, ks);
    if (exponent) *exponent = result.exponent;
  });
}

asvl_status asvl_certify_store(const char* env, const char* store_path,
                               int initial_state, asvl_agent_certificate* out,
                               int capacity, int* count, int* approximate) {
  ASVL_REQUIRE(env);
  ASVL_REQUIRE(store_path);
  ASVL_REQUIRE(count);
  if (capacity > 0) ASVL_REQUIRE(out);
  asvl::GapCertificate cert;
  const asvl_status status = Guard([&] {
    const auto game = asvl::MakeEnvironment(env);
    std::ifstream in(store_path);
    if (!in) throw asvl::IoError(std::string("cannot open store: ") + store_path);
    const auto store = asvl::PolicySnapshotStore::Read(in);
    std::optional<int> state;
    if (initial_state >= 0) state = initial_state;
    cert = asvl::ComputeGapCertificate(store, game, state);
  });
  if (status != ASVL_OK) return status;
  if (approximate) *approximate = cert.approximate ? 1 : 0;
  return CopyCertificate(cert, out, capacity, count);
}

asvl_status asvl_session_create(const asvl_config* config, uint64_t seed,
                                asvl_session** out) {
  ASVL_REQUIRE(config);
  ASVL_REQUIRE(out);
  *out = nullptr;
  return Guard([&] {
    config->config.Validate();
    auto handle = std::make_unique<asvl_session>();
    handle->config = config->config;
    handle->game = std::make_unique<asvl::AggregativeMarkovGame>(
        asvl::MakeEnvironment(handle->config.env));
    handle->session = asvl::MakeSession(handle->config, *handle->game, seed,
                                        handle->config.episodes);
    handle->return_sums.assign(handle->game->num_agents(), 0.0);
    *out = handle.release();
  });
}

void asvl_session_destroy(asvl_session* session) { delete session; }

asvl_status asvl_session_run(asvl_session* session, int episodes) {
  ASVL_REQUIRE(session);
  if (episodes < 0) return Fail(ASVL_ERR_INVALID, "episodes must be >= 0");
  return Guard([&] {
    for (int k = 0; k < episodes; ++k) {
      const auto ret = session->session->RunEpisode();
      for (std::size_t i = 0; i < ret.raw.size(); ++i) {
        session->return_sums[i] += ret.raw[i];
      }
    }
  });
}

asvl_status asvl_session_episodes(const asvl_session* session, int* out) {
  ASVL_REQUIRE(session);
  ASVL_REQUIRE(out);
  *out = session->session->episodes();
  return ASVL_OK;
}

asvl_status asvl_session_mean_return(const asvl_session* session, int agent,
                                     double* out) {
  ASVL_REQUIRE(session);
  ASVL_REQUIRE(out);
  if (agent < 0 || agent >= static_cast<int>(session->return_sums.size())) {
    return Fail(ASVL_ERR_INVALID, "agent out of range");
  }
  const int k = session->session->episodes();
  if (k == 0) return Fail(ASVL_ERR_INVALID, "no episodes have been run");
  *out = session->return_sums[agent] / k;
  return ASVL_OK;
}

asvl_status asvl_session_certificate(const asvl_session* session,
                                     asvl_agent_certificate* out, int capacity,
                                     int* count) {
  ASVL_REQUIRE(session);
  ASVL_REQUIRE(count);
  if (capacity > 0) ASVL_REQUIRE(out);
  const asvl::PolicySnapshotStore* store = session->session->store();
  if (store == nullptr) {
    return Fail(ASVL_ERR_INVALID, "only ASVL sessions can be certified");
  }
  asvl::GapCertificate cert;
  const asvl_status status = Guard([&] {
    cert = asvl::ComputeGapCertificate(*store, *session->game,
                                       session->config.initial_state);
  });
  if (status != ASVL_OK) return status;
  return CopyCertificate(cert, out, capacity, count);
}

}  // extern "C"
