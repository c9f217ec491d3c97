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

#ifndef ASVL_FLUCTUATION_H_
#define ASVL_FLUCTUATION_H_

#include <span>
#include <string>

namespace asvl {

enum class FluctuationMode { kCv, kMad, kNone };

std::string FluctuationModeName(FluctuationMode mode);
FluctuationMode ParseFluctuationMode(const std::string& name);

struct FluctuationConfig {
  FluctuationMode mode = FluctuationMode::kCv;
  double lambda_min = 0.9;
  double cv_max = 0.5;
  double mad_max = 1.0;

  // Requires T/(T+1) < lambda_min <= 1 and positive caps.
  void Validate(int horizon) const;
};

// max(T/(T+1) + 0.01, 0.9), clipped to 1.
double DefaultLambdaMin(int horizon);

// Stage-length multiplier in [lambda_min, 1] computed from the aggregates
// observed within a stage. Fewer than two samples give 1.
double FluctuationCoefficient(const FluctuationConfig& config,
                              std::span<const double> samples, int horizon);

}  // namespace asvl

#endif  // ASVL_FLUCTUATION_H_
