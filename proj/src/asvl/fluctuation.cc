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

#include "asvl/fluctuation.h"

#include <algorithm>
#include <cmath>

#include "asvl/game.h"

namespace asvl {

std::string FluctuationModeName(FluctuationMode mode) {
  switch (mode) {
    case FluctuationMode::kCv:
      return "cv";
    case FluctuationMode::kMad:
      return "mad";
    case FluctuationMode::kNone:
      return "none";
  }
  return "none";
}

FluctuationMode ParseFluctuationMode(const std::string& name) {
  if (name == "cv" || name == "CV") return FluctuationMode::kCv;
  if (name == "mad" || name == "MAD") return FluctuationMode::kMad;
  if (name == "none" || name == "NONE") return FluctuationMode::kNone;
  throw Error("unknown fluctuation mode '" + name + "'");
}

void FluctuationConfig::Validate(int horizon) const {
  const double floor = static_cast<double>(horizon) / (horizon + 1);
  if (!(lambda_min > floor && lambda_min <= 1.0)) {
    throw Error("lambda_min must lie in (T/(T+1), 1]");
  }
  if (!(cv_max > 0.0)) throw Error("cv_max must be positive");
  if (!(mad_max > 0.0)) throw Error("mad_max must be positive");
}

double DefaultLambdaMin(int horizon) {
  const double floor = static_cast<double>(horizon) / (horizon + 1);
  return std::min(std::max(floor + 0.01, 0.9), 1.0);
}

double FluctuationCoefficient(const FluctuationConfig& config,
                              std::span<const double> samples, int horizon) {
  config.Validate(horizon);
  for (double d : samples) {
    if (!(d > 0.0)) throw Error("aggregate must be positive");
  }
  if (config.mode == FluctuationMode::kNone || samples.size() < 2) return 1.0;

  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double d : samples) mean += d;
  mean /= n;

  double spread = 0.0;
  double cap = 0.0;
  if (config.mode == FluctuationMode::kCv) {
    double ss = 0.0;
    for (double d : samples) ss += (d - mean) * (d - mean);
    spread = std::sqrt(ss / (n - 1.0)) / mean;
    cap = config.cv_max;
  } else {
    double abs_dev = 0.0;
    for (double d : samples) abs_dev += std::abs(d - mean);
    spread = abs_dev / n;
    cap = config.mad_max;
  }
  const double gamma = std::min(spread / cap, 1.0);
  return config.lambda_min + (1.0 - config.lambda_min) * gamma;
}

}  // namespace asvl
