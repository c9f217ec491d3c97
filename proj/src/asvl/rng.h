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

#ifndef ASVL_RNG_H_
#define ASVL_RNG_H_

#include <cstdint>
#include <random>
#include <span>

namespace asvl {

// Stream identifiers for DeriveSeed.
enum class StreamPurpose : std::uint64_t {
  kEnvironment = 1,
  kAgentAction = 2,
  kCertification = 3,
  kBaseline = 4,
  kGenerator = 5,
};

// Mixes a master seed with a (purpose, index) pair into an independent
// stream seed (splitmix64 finalizer over the combined words).
std::uint64_t DeriveSeed(std::uint64_t master, StreamPurpose purpose,
                         std::uint64_t index = 0);

// Portable generator: mt19937_64 with hand-rolled conversions, so draw
// sequences do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  // Uniform on {0, ..., n-1}.
  int UniformInt(int n);

 private:
  std::mt19937_64 engine_;
};

// Inverse-CDF draw from a probability vector.
int SampleCategorical(std::span<const double> probs, Rng& rng);

}  // namespace asvl

#endif  // ASVL_RNG_H_
