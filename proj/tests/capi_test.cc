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

// Exercises the shared library through its C header only.
#include "asvl/asvl.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string LastError() { return asvl_last_error(); }

TEST(CapiTest, VersionAndNames) {
  EXPECT_STREQ(asvl_version(), "0.1.0");
  EXPECT_STREQ(asvl_status_name(ASVL_OK), "ok");
  EXPECT_STREQ(asvl_status_name(static_cast<asvl_status>(99)), "unknown");
}

TEST(CapiTest, NullArguments) {
  asvl_game* game = nullptr;
  EXPECT_EQ(asvl_game_create(nullptr, &game), ASVL_ERR_NULL_ARGUMENT);
  EXPECT_EQ(asvl_game_create("fishermen", nullptr), ASVL_ERR_NULL_ARGUMENT);
  EXPECT_FALSE(LastError().empty());
  int n = 0;
  EXPECT_EQ(asvl_game_horizon(nullptr, &n), ASVL_ERR_NULL_ARGUMENT);
  EXPECT_EQ(asvl_config_set(nullptr, "episodes", "1"), ASVL_ERR_NULL_ARGUMENT);
  EXPECT_EQ(asvl_run(nullptr), ASVL_ERR_NULL_ARGUMENT);
  EXPECT_EQ(asvl_session_run(nullptr, 1), ASVL_ERR_NULL_ARGUMENT);
  asvl_game_destroy(nullptr);
  asvl_config_destroy(nullptr);
  asvl_session_destroy(nullptr);
}

TEST(CapiTest, GameQueries) {
  asvl_game* game = nullptr;
  ASSERT_EQ(asvl_game_create("fishermen", &game), ASVL_OK);
  int v = 0;
  ASSERT_EQ(asvl_game_horizon(game, &v), ASVL_OK);
  EXPECT_EQ(v, 2);
  ASSERT_EQ(asvl_game_num_agents(game, &v), ASVL_OK);
  EXPECT_EQ(v, 2);
  ASSERT_EQ(asvl_game_num_states(game, 1, &v), ASVL_OK);
  EXPECT_EQ(v, 2);
  ASSERT_EQ(asvl_game_num_actions(game, 0, 0, 1, &v), ASVL_OK);
  EXPECT_EQ(v, 2);
  EXPECT_EQ(asvl_game_num_states(game, 5, &v), ASVL_ERR_INVALID);
  asvl_game_destroy(game);

  EXPECT_EQ(asvl_game_create("no-such-game.json", &game), ASVL_ERR_IO);
  EXPECT_EQ(game, nullptr);
  EXPECT_EQ(asvl_game_create("random:T=2,N=3,S=2,A=2,seed=4,agg=1", &game), ASVL_OK);
  ASSERT_EQ(asvl_game_num_agents(game, &v), ASVL_OK);
  EXPECT_EQ(v, 3);
  asvl_game_destroy(game);
}

TEST(CapiTest, FishermenTables) {
  double r = 0.0, high = 0.0, low = 0.0;
  ASSERT_EQ(asvl_fishermen_reward(0, 5, 10, &r), ASVL_OK);
  EXPECT_DOUBLE_EQ(r, 10.0);
  ASSERT_EQ(asvl_fishermen_reward(1, 3, 8, &r), ASVL_OK);
  EXPECT_DOUBLE_EQ(r, 2.0);
  ASSERT_EQ(asvl_fishermen_transition(0, 10, &high, &low), ASVL_OK);
  EXPECT_DOUBLE_EQ(high, 0.2);
  EXPECT_DOUBLE_EQ(low, 0.8);
  EXPECT_EQ(asvl_fishermen_reward(2, 5, 10, &r), ASVL_ERR_INVALID);
  EXPECT_EQ(asvl_fishermen_transition(0, 7, &high, &low), ASVL_ERR_INVALID);
}

TEST(CapiTest, ConfigErrorsNameTheKey) {
  asvl_config* config = nullptr;
  ASSERT_EQ(asvl_config_create(&config), ASVL_OK);
  EXPECT_EQ(asvl_config_set(config, "episodes", "-3"), ASVL_ERR_INVALID);
  EXPECT_NE(LastError().find("'episodes'"), std::string::npos);
  EXPECT_EQ(asvl_config_set(config, "colour", "red"), ASVL_ERR_INVALID);
  EXPECT_NE(LastError().find("'colour'"), std::string::npos);
  EXPECT_EQ(asvl_config_load_file(config, "/nonexistent/run.cfg"), ASVL_ERR_IO);
  asvl_config_destroy(config);
}

TEST(CapiTest, SessionAndCertificate) {
  asvl_config* config = nullptr;
  ASSERT_EQ(asvl_config_create(&config), ASVL_OK);
  ASSERT_EQ(asvl_config_set(config, "episodes", "500"), ASVL_OK);
  asvl_session* session = nullptr;
  ASSERT_EQ(asvl_session_create(config, 3, &session), ASVL_OK);
  ASSERT_EQ(asvl_session_run(session, 500), ASVL_OK);
  int episodes = 0;
  ASSERT_EQ(asvl_session_episodes(session, &episodes), ASVL_OK);
  EXPECT_EQ(episodes, 500);
  double mean = 0.0;
  ASSERT_EQ(asvl_session_mean_return(session, 0, &mean), ASVL_OK);
  EXPECT_GE(mean, 4.0);
  EXPECT_LE(mean, 36.0);
  EXPECT_EQ(asvl_session_mean_return(session, 2, &mean), ASVL_ERR_INVALID);

  asvl_agent_certificate certs[2];
  int count = 0;
  EXPECT_EQ(asvl_session_certificate(session, certs, 1, &count),
            ASVL_ERR_BUFFER_TOO_SMALL);
  EXPECT_EQ(count, 2);
  ASSERT_EQ(asvl_session_certificate(session, certs, 2, &count), ASVL_OK);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(certs[i].agent, i);
    EXPECT_NEAR(certs[i].gap, certs[i].br_upper - certs[i].value, 1e-12);
    EXPECT_GE(certs[i].gap, -1e-12);
    EXPECT_LE(certs[i].br_upper, 2.0 + 1e-12);
  }
  asvl_session_destroy(session);

  ASSERT_EQ(asvl_config_set(config, "algo", "centralized-q"), ASVL_OK);
  ASSERT_EQ(asvl_session_create(config, 3, &session), ASVL_OK);
  ASSERT_EQ(asvl_session_run(session, 10), ASVL_OK);
  EXPECT_EQ(asvl_session_certificate(session, certs, 2, &count), ASVL_ERR_INVALID);
  asvl_session_destroy(session);
  asvl_config_destroy(config);
}

TEST(CapiTest, RunSaveAndCertifyStore) {
  const fs::path dir = fs::temp_directory_path() / "asvl_capi_run";
  fs::remove_all(dir);
  asvl_config* config = nullptr;
  ASSERT_EQ(asvl_config_create(&config), ASVL_OK);
  ASSERT_EQ(asvl_config_set(config, "episodes", "300"), ASVL_OK);
  ASSERT_EQ(asvl_config_set(config, "seeds", "5"), ASVL_OK);
  ASSERT_EQ(asvl_config_set(config, "save-store", "true"), ASVL_OK);
  ASSERT_EQ(asvl_config_set(config, "out", dir.c_str()), ASVL_OK);
  ASSERT_EQ(asvl_run(config), ASVL_OK) << LastError();
  EXPECT_TRUE(fs::exists(dir / "certificates.csv"));

  asvl_agent_certificate certs[2];
  int count = 0, approximate = -1;
  const std::string store = (dir / "store_5.txt").string();
  ASSERT_EQ(asvl_certify_store("fishermen", store.c_str(), -1, certs, 2, &count,
                               &approximate),
            ASVL_OK)
      << LastError();
  EXPECT_EQ(count, 2);
  EXPECT_EQ(approximate, 0);

  // Same numbers as the run's own certificate file (10 significant digits).
  std::ifstream in(dir / "certificates.csv");
  std::string line;
  std::getline(in, line);
  for (int i = 0; i < 2; ++i) {
    ASSERT_TRUE(std::getline(in, line));
    double gap = std::stod(line.substr(line.rfind(',') + 1));
    EXPECT_NEAR(gap, certs[i].gap, 1e-9 * std::max(1.0, std::fabs(gap)));
  }
  EXPECT_EQ(asvl_certify_store("random:T=1,N=2,S=1,A=2,seed=0,agg=1", store.c_str(),
                               -1, certs, 2, &count, &approximate),
            ASVL_ERR_INVALID);
  EXPECT_EQ(asvl_certify_store("fishermen", "/nonexistent/store.txt", -1, certs, 2,
                               &count, &approximate),
            ASVL_ERR_IO);

  const int grid[] = {40, 80};
  double exponent = 0.0;
  ASSERT_EQ(asvl_sweep(config, grid, 2, &exponent), ASVL_OK) << LastError();
  EXPECT_TRUE(std::isfinite(exponent));
  EXPECT_EQ(asvl_sweep(config, grid, 0, &exponent), ASVL_ERR_INVALID);
  asvl_config_destroy(config);
}

}  // namespace
