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

/* C interface to the ASVL library. All handles are opaque; every call that
 * can fail returns an asvl_status and records a message retrievable with
 * asvl_last_error() on the calling thread. */
#ifndef ASVL_ASVL_H_
#define ASVL_ASVL_H_

#include <stdint.h>

#if defined(ASVL_BUILDING_LIBRARY)
#define ASVL_API __attribute__((visibility("default")))
#else
#define ASVL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum asvl_status {
  ASVL_OK = 0,
  ASVL_ERR_NULL_ARGUMENT = 1,
  ASVL_ERR_INVALID = 2,           /* bad input or failed precondition */
  ASVL_ERR_IO = 3,                /* file could not be read or written */
  ASVL_ERR_BUFFER_TOO_SMALL = 4,
  ASVL_ERR_NO_MEMORY = 5,
  ASVL_ERR_INTERNAL = 6,
} asvl_status;

typedef struct asvl_game asvl_game;
typedef struct asvl_config asvl_config;
typedef struct asvl_session asvl_session;

typedef struct asvl_agent_certificate {
  int agent;
  double value;     /* exact value of the certified policy */
  double br_upper;  /* upper bound on the best-response value */
  double gap;       /* br_upper - value */
} asvl_agent_certificate;

ASVL_API const char* asvl_version(void);
/* Message of the last failed call on this thread; "" if none. */
ASVL_API const char* asvl_last_error(void);
ASVL_API const char* asvl_status_name(asvl_status status);

/* Games: "fishermen", "fishermen:initial=low",
 * "random:T=2,N=2,S=2,A=2,seed=0,agg=1" or a game file path. */
ASVL_API asvl_status asvl_game_create(const char* env, asvl_game** out);
ASVL_API void asvl_game_destroy(asvl_game* game);
ASVL_API asvl_status asvl_game_horizon(const asvl_game* game, int* out);
ASVL_API asvl_status asvl_game_num_agents(const asvl_game* game, int* out);
ASVL_API asvl_status asvl_game_num_states(const asvl_game* game, int t,
                                          int* out);
ASVL_API asvl_status asvl_game_num_actions(const asvl_game* game, int t, int s,
                                           int agent, int* out);

/* Fishermen tables. state: 0 = high stock, 1 = low stock. */
ASVL_API asvl_status asvl_fishermen_reward(int state, double own_effort,
                                           double total_effort, double* out);
ASVL_API asvl_status asvl_fishermen_transition(int state, double total_effort,
                                               double* p_high, double* p_low);

/* Run configuration; keys mirror the command-line flags. */
ASVL_API asvl_status asvl_config_create(asvl_config** out);
ASVL_API void asvl_config_destroy(asvl_config* config);
ASVL_API asvl_status asvl_config_set(asvl_config* config, const char* key,
                                     const char* value);
/* Flat "key = value" file; later asvl_config_set calls override it. */
ASVL_API asvl_status asvl_config_load_file(asvl_config* config,
                                           const char* path);

/* Writes the run artifacts under the configured output directory. */
ASVL_API asvl_status asvl_run(const asvl_config* config);
/* One fresh run per (seed, K); exponent may be NULL. */
ASVL_API asvl_status asvl_sweep(const asvl_config* config, const int* grid,
                                int grid_size, double* exponent);

/* Certificate from a saved snapshot store. initial_state < 0 weights the
 * initial distribution. *count receives the number of agents. */
ASVL_API asvl_status asvl_certify_store(const char* env, const char* store_path,
                                        int initial_state,
                                        asvl_agent_certificate* out,
                                        int capacity, int* count,
                                        int* approximate);

/* Incremental single-seed learning run of the configured algorithm. */
ASVL_API asvl_status asvl_session_create(const asvl_config* config,
                                         uint64_t seed, asvl_session** out);
ASVL_API void asvl_session_destroy(asvl_session* session);
ASVL_API asvl_status asvl_session_run(asvl_session* session, int episodes);
ASVL_API asvl_status asvl_session_episodes(const asvl_session* session,
                                           int* out);
/* Mean raw return of `agent` over every episode so far. */
ASVL_API asvl_status asvl_session_mean_return(const asvl_session* session,
                                              int agent, double* out);
ASVL_API asvl_status asvl_session_certificate(const asvl_session* session,
                                              asvl_agent_certificate* out,
                                              int capacity, int* count);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* ASVL_ASVL_H_ */
