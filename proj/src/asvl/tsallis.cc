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

#include "asvl/tsallis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "asvl/game.h"

namespace asvl {
namespace {

constexpr double kMinPolicyMass = 1e-12;

// Works in coordinates shifted by min Q so that large cumulative losses do
// not cost precision: d[a] = Q(a) - min Q >= 0 and y = x - min Q < 0.
struct Shifted {
  double min_loss;
  std::vector<double> gaps;
};

Shifted Shift(std::span<const double> cumulative_loss) {
  if (cumulative_loss.empty()) throw Error("bandit needs at least one arm");
  Shifted out;
  out.min_loss =
      *std::min_element(cumulative_loss.begin(), cumulative_loss.end());
  out.gaps.reserve(cumulative_loss.size());
  for (double q : cumulative_loss) out.gaps.push_back(q - out.min_loss);
  return out;
}

double Residual(const std::vector<double>& gaps, double eta, double y) {
  double total = 0.0;
  for (double d : gaps) {
    const double z = eta * (d - y);
    total += 4.0 / (z * z);
  }
  return total - 1.0;
}

double Bisect(const std::vector<double>& gaps, double eta) {
  const double n = static_cast<double>(gaps.size());
  // f(lo) <= 0 since every weight is at most 1/A there; f(hi) >= 0 since the
  // minimal arm alone has weight 1.
  double lo = -2.0 * std::sqrt(n) / eta;
  double hi = -2.0 / eta;
  if (gaps.size() == 1) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (Residual(gaps, eta, mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool NewtonStep(const std::vector<double>& gaps, double eta, double& y,
                double& residual) {
  double sum_w = 0.0;
  double sum_w32 = 0.0;
  for (double d : gaps) {
    const double z = eta * (d - y);
    const double w = 4.0 / (z * z);
    sum_w += w;
    sum_w32 += w * std::sqrt(w);
  }
  residual = sum_w - 1.0;
  const double next = y - residual / (eta * sum_w32);
  if (!std::isfinite(next) || next >= 0.0) return false;
  y = next;
  return true;
}

}  // namespace

double NormalizationResidual(std::span<const double> cumulative_loss,
                             double eta, double x) {
  double total = 0.0;
  for (double q : cumulative_loss) {
    const double z = eta * (q - x);
    total += 4.0 / (z * z);
  }
  return total - 1.0;
}

NormalizerSolution SolveNormalizer(std::span<const double> cumulative_loss,
                                   double eta, double warm_start) {
  if (!(eta > 0.0)) throw Error("learning rate must be positive");
  const Shifted shifted = Shift(cumulative_loss);
  NormalizerSolution out;
  if (shifted.gaps.size() == 1) {
    out.offset = -2.0 / eta;
    out.x = shifted.min_loss + out.offset;
    return out;
  }

  double y = warm_start - shifted.min_loss;
  bool ok = std::isfinite(y) && y < 0.0;
  double residual = ok ? Residual(shifted.gaps, eta, y) : 1.0;
  while (ok && std::abs(residual) > kNormalizerTolerance) {
    if (out.iterations == kMaxNewtonIterations) {
      ok = false;
      break;
    }
    double at_y = 0.0;
    ok = NewtonStep(shifted.gaps, eta, y, at_y);
    ++out.iterations;
    if (ok) residual = Residual(shifted.gaps, eta, y);
  }
  if (ok) {
    // One polishing step; quadratic convergence takes the residual to
    // rounding level.
    double polished = y;
    double unused = 0.0;
    if (NewtonStep(shifted.gaps, eta, polished, unused) &&
        std::abs(Residual(shifted.gaps, eta, polished)) <=
            std::abs(residual)) {
      y = polished;
    }
  } else {
    y = Bisect(shifted.gaps, eta);
    out.used_bisection = true;
  }
  out.offset = y;
  out.x = shifted.min_loss + y;
  return out;
}

double SolveNormalizerByBisection(std::span<const double> cumulative_loss,
                                  double eta) {
  if (!(eta > 0.0)) throw Error("learning rate must be positive");
  const Shifted shifted = Shift(cumulative_loss);
  return shifted.min_loss + Bisect(shifted.gaps, eta);
}

TsallisInfBandit::TsallisInfBandit(int num_arms)
    : cumulative_loss_(num_arms, 0.0), policy_(num_arms, 0.0) {
  if (num_arms < 1) throw Error("bandit needs at least one arm");
  Reset();
}

void TsallisInfBandit::LossUpdate(int arm, double loss, double loss_cap) {
  if (arm < 0 || arm >= num_arms()) {
    throw Error("arm " + std::to_string(arm) + " out of range");
  }
  if (policy_[arm] < kMinPolicyMass) throw Error("degenerate policy mass");
  if (loss < 0.0) {
    loss = 0.0;
    ++clamped_losses_;
  } else if (loss > loss_cap + 1e-9) {
    loss = loss_cap;
    ++clamped_losses_;
  }
  cumulative_loss_[arm] += loss / policy_[arm];
}

void TsallisInfBandit::RecomputePolicy(double eta) {
  const NormalizerSolution solution =
      SolveNormalizer(cumulative_loss_, eta, normalizer_);
  if (solution.used_bisection) ++bisection_fallbacks_;
  eta_ = eta;
  normalizer_ = solution.x;
  const Shifted shifted = Shift(cumulative_loss_);
  const double y = solution.offset;
  double total = 0.0;
  for (int a = 0; a < num_arms(); ++a) {
    const double z = eta * (shifted.gaps[a] - y);
    policy_[a] = 4.0 / (z * z);
    total += policy_[a];
  }
  for (double& p : policy_) p /= total;
}

void TsallisInfBandit::Reset() {
  std::fill(cumulative_loss_.begin(), cumulative_loss_.end(), 0.0);
  std::fill(policy_.begin(), policy_.end(), 1.0 / num_arms());
  eta_ = 2.0;
  normalizer_ = -2.0 * std::sqrt(static_cast<double>(num_arms())) / eta_;
}

}  // namespace asvl
