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

#ifndef ASVL_TSALLIS_H_
#define ASVL_TSALLIS_H_

#include <span>
#include <vector>

#include "asvl/rng.h"

namespace asvl {

// Convergence threshold on |sum_a 4(eta(Q(a) - x))^-2 - 1|.
inline constexpr double kNormalizerTolerance = 1e-10;
inline constexpr int kMaxNewtonIterations = 100;

struct NormalizerSolution {
  double x = 0.0;
  // x - min Q, kept separately for precision when Q is large.
  double offset = 0.0;
  int iterations = 0;
  bool used_bisection = false;
};

// sum_a 4(eta(Q(a) - x))^-2 - 1.
double NormalizationResidual(std::span<const double> cumulative_loss,
                             double eta, double x);

// Newton iteration x <- x - (sum w - 1) / (eta sum w^{3/2}) from
// `warm_start`, falling back to bisection when an iterate leaves
// x < min Q or the iteration does not converge.
NormalizerSolution SolveNormalizer(std::span<const double> cumulative_loss,
                                   double eta, double warm_start);

// Pure bisection on the bracket [min Q - 2 sqrt(A)/eta, min Q - 2/eta].
double SolveNormalizerByBisection(std::span<const double> cumulative_loss,
                                  double eta);

// Tsallis-INF (1/2-Tsallis entropy) adversarial bandit over a fixed arm set:
// importance-weighted cumulative losses Q and policy 4(eta(Q - x))^-2.
class TsallisInfBandit {
 public:
  explicit TsallisInfBandit(int num_arms);

  int num_arms() const { return static_cast<int>(policy_.size()); }
  std::span<const double> policy() const { return policy_; }
  std::span<const double> cumulative_loss() const { return cumulative_loss_; }
  double eta() const { return eta_; }
  double normalizer() const { return normalizer_; }
  // Number of losses that fell outside [0, cap + 1e-9] and were clamped.
  int clamped_losses() const { return clamped_losses_; }
  int bisection_fallbacks() const { return bisection_fallbacks_; }

  // Q(arm) += loss / pi(arm). `loss_cap` is the largest admissible loss.
  void LossUpdate(int arm, double loss, double loss_cap = 1.0);

  // Solves for the normalizer at learning rate `eta` and refreshes the policy.
  void RecomputePolicy(double eta);

  int Sample(Rng& rng) const { return SampleCategorical(policy_, rng); }

  // Uniform policy, Q = 0, and the normalizer that solves that case for the
  // first in-stage learning rate eta = 2.
  void Reset();

 private:
  std::vector<double> cumulative_loss_;
  std::vector<double> policy_;
  double eta_ = 2.0;
  double normalizer_ = 0.0;
  int clamped_losses_ = 0;
  int bisection_fallbacks_ = 0;
};

}  // namespace asvl

#endif  // ASVL_TSALLIS_H_
