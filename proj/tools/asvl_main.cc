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

// Command-line driver: run, sweep and certify.

#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "asvl/asvl.h"

namespace {

struct ConfigFlags {
  std::string config_file;
  std::map<std::string, std::string> values;  // flag name -> text
  std::map<std::string, bool> switches;
};

// Value flags mirror the configuration keys one to one.
const std::pair<const char*, const char*> kValueKeys[] = {
    {"env", "fishermen[:initial=high|low], random:T=,N=,S=,A=,seed=,agg= or a game file"},
    {"episodes", "Episodes per seed (K)"},
    {"seed", "Alias of --seeds"},
    {"seeds", "Seeds: 3, 1,2,5 or 1-20"},
    {"algo", "asvl, centralized-q or independent-q"},
    {"fluctuation", "Stage-length estimator: cv, mad or none"},
    {"lambda-min", "Smallest stage-length multiplier (default from T)"},
    {"cv-max", "Coefficient of variation mapped to lambda = lambda_min"},
    {"mad-max", "Mean absolute deviation mapped to lambda = lambda_min"},
    {"iota", "Log factor of the bonus (default log(2NSAKT/p))"},
    {"p", "Failure probability for the default iota"},
    {"bonus-scale", "Constant in front of the bonus"},
    {"epsilon-end", "Final exploration rate of the Q-learning baselines"},
    {"checkpoints", "Comma-separated episodes to certify at (default: K)"},
    {"out", "Output directory"},
    {"initial-state", "Certify from this state instead of the initial distribution"},
    {"threads", "Worker threads; 0 uses every hardware thread"}};
const std::pair<const char*, const char*> kSwitchKeys[] = {
    {"compact-store", "Keep one policy per stage (approximate certificates)"},
    {"log-samples", "Record sampled actions and rewards in the store"},
    {"save-store", "Write store_<seed>.txt"}};

void AddConfigFlags(CLI::App* app, ConfigFlags& flags) {
  app->add_option("--config", flags.config_file,
                  "Flat key = value file; flags override it");
  for (const auto& [key, help] : kValueKeys) {
    app->add_option(std::string("--") + key, flags.values[key], help);
  }
  for (const auto& [key, help] : kSwitchKeys) {
    app->add_flag(std::string("--") + key, flags.switches[key], help);
  }
}

int Report(asvl_status status) {
  if (status == ASVL_OK) return 0;
  std::fprintf(stderr, "asvl: %s\n", asvl_last_error());
  return status == ASVL_ERR_INVALID ? 2 : 1;
}

asvl_status BuildConfig(const CLI::App* app, const ConfigFlags& flags,
                        asvl_config** out) {
  asvl_status status = asvl_config_create(out);
  if (status != ASVL_OK) return status;
  if (!flags.config_file.empty()) {
    status = asvl_config_load_file(*out, flags.config_file.c_str());
    if (status != ASVL_OK) return status;
  }
  for (const auto& [key, value] : flags.values) {
    if (app->count("--" + key) == 0) continue;
    status = asvl_config_set(*out, key.c_str(), value.c_str());
    if (status != ASVL_OK) return status;
  }
  for (const auto& [key, on] : flags.switches) {
    if (app->count("--" + key) == 0) continue;
    status = asvl_config_set(*out, key.c_str(), on ? "true" : "false");
    if (status != ASVL_OK) return status;
  }
  return ASVL_OK;
}

std::vector<int> ParseGrid(const std::string& text) {
  std::vector<int> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) grid.push_back(std::stoi(item));
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive stage-based V-learning experiments"};
  app.set_version_flag("--version", std::string(asvl_version()));
  app.require_subcommand(1);

  ConfigFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Learn and write reward, stage and certificate CSVs");
  AddConfigFlags(run, run_flags);

  ConfigFlags sweep_flags;
  std::string grid_text;
  CLI::App* sweep = app.add_subcommand("sweep", "Certificate gap against K");
  AddConfigFlags(sweep, sweep_flags);
  sweep->add_option("--grid", grid_text, "Comma-separated increasing K values")
      ->required();

  std::string env = "fishermen", store_path;
  int initial_state = -1;
  CLI::App* certify = app.add_subcommand("certify", "Certificate of a saved snapshot store");
  certify->add_option("--env", env);
  certify->add_option("--store", store_path)->required();
  certify->add_option("--initial-state", initial_state,
                      "Fixed initial state; negative weights rho");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed() || sweep->parsed()) {
    const bool is_run = run->parsed();
    asvl_config* config = nullptr;
    asvl_status status =
        BuildConfig(is_run ? run : sweep, is_run ? run_flags : sweep_flags, &config);
    if (status == ASVL_OK && is_run) {
      status = asvl_run(config);
    } else if (status == ASVL_OK) {
      std::vector<int> grid;
      try {
        grid = ParseGrid(grid_text);
      } catch (const std::exception&) {
        asvl_config_destroy(config);
        std::fprintf(stderr, "asvl: invalid value for 'grid': %s\n", grid_text.c_str());
        return 2;
      }
      double exponent = 0.0;
      status = asvl_sweep(config, grid.data(), static_cast<int>(grid.size()), &exponent);
      if (status == ASVL_OK) std::printf("exponent %.6f\n", exponent);
    }
    asvl_config_destroy(config);
    return Report(status);
  }

  std::vector<asvl_agent_certificate> certs(64);
  int count = 0, approximate = 0;
  asvl_status status = asvl_certify_store(env.c_str(), store_path.c_str(), initial_state,
                                          certs.data(), static_cast<int>(certs.size()),
                                          &count, &approximate);
  if (status == ASVL_ERR_BUFFER_TOO_SMALL) {
    certs.resize(count);
    status = asvl_certify_store(env.c_str(), store_path.c_str(), initial_state, certs.data(),
                                count, &count, &approximate);
  }
  if (status != ASVL_OK) return Report(status);
  std::printf("agent,value,br_upper,gap%s\n", approximate ? ",approximate" : "");
  for (int i = 0; i < count; ++i) {
    std::printf("%d,%.10g,%.10g,%.10g%s\n", certs[i].agent, certs[i].value,
                certs[i].br_upper, certs[i].gap, approximate ? ",1" : "");
  }
  return 0;
}
