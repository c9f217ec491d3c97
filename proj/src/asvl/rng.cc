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

#include "asvl/rng.h"

namespace asvl {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t master, StreamPurpose purpose,
                         std::uint64_t index) {
  std::uint64_t h = SplitMix64(master);
  h = SplitMix64(h ^ static_cast<std::uint64_t>(purpose));
  return SplitMix64(h ^ (index * 0xd6e8feb86659fd93ULL));
}

int Rng::UniformInt(int n) {
  // Lemire's multiply-shift with rejection for an unbiased draw.
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t threshold = (0 - range) % range;
  while (true) {
    const unsigned __int128 m =
        static_cast<unsigned __int128>(engine_()) * range;
    if (static_cast<std::uint64_t>(m) >= threshold) {
      return static_cast<int>(m >> 64);
    }
  }
}

int SampleCategorical(std::span<const double> probs, Rng& rng) {
  const double u = rng.Uniform01();
  double cumulative = 0.0;
  int last_positive = 0;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    if (probs[a] <= 0.0) continue;
    cumulative += probs[a];
    last_positive = static_cast<int>(a);
    if (u < cumulative) return last_positive;
  }
  // Rounding left u above the accumulated mass.
  return last_positive;
}

}  // namespace asvl
