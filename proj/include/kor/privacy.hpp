/*
 * Copyright 2026 The kor-sketch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>

#include "kor/sketch.hpp"

namespace kor {

/// Noise bookkeeping for a randomized sketch. p_eff = 1/(2+epsilon_eff)
/// exactly; merge_count is 0 for a freshly noised sketch and increments per
/// merge, so the estimator can pick the right flip probability without any
/// caller bookkeeping.
struct NoiseState {
  double p_eff = 0.0;
  double epsilon_eff = 0.0;
  uint32_t merge_count = 0;

  bool operator==(const NoiseState&) const = default;
};

/// Bit matrix plus noise state. Produced by randomize() or merge(); the
/// bits of merged sketches describe the symmetric difference of the inputs.
struct NoisySketch {
  ParamsDigest digest{};
  BitMatrix bits;
  NoiseState noise;

  bool operator==(const NoisySketch&) const = default;
};

/// Laplace-noised total set weight.
struct PrivateWeight {
  double value = 0.0;
  double epsilon = 0.0;
  double sensitivity = 0.0;
};

/// Flips each of the tau bits independently with probability
/// p = params.flip_prob, yielding an epsilon-differentially-private release
/// of the sketch. Throws PrivacyPreconditionViolated unless
/// p in (1/(e^eps+1), 1/2).
NoisySketch randomize(const KorSketch& sketch, const SketchParams& params,
                      std::mt19937_64& rng);

/// Noises a clean sketch at an explicit budget with p = 1/(2+epsilon); the
/// family is identified by the digest the sketch already carries. Lets a
/// party release at a different budget than the family default.
NoisySketch randomize_at(const KorSketch& sketch, double epsilon,
                         std::mt19937_64& rng);

/// Flip probability of the XOR of two independent noise vectors.
double compose_flip_prob(double p_a, double p_b);

/// XOR of two noisy sketches: a noisy sketch of the symmetric difference
/// with p_eff = p_a(1-p_b) + p_b(1-p_a) and epsilon_eff = 1/p_eff - 2.
NoisySketch merge(const NoisySketch& a, const NoisySketch& b);

/// total + Laplace(scale = sensitivity/epsilon), sampled by inverse CDF on
/// a 64-bit uniform. Pass the table's max weight as the sensitivity: one
/// element changes a set weight by at most that much.
PrivateWeight laplace_weight(double total, double epsilon, double sensitivity,
                             std::mt19937_64& rng);

/// Enumerates every noise vector on an n_small-bit single-level sketch for
/// a pair of neighbors differing in exactly one bit and returns the largest
/// outcome-probability ratio, which equals (1-p)/p. Test utility backing
/// the randomized-response privacy argument. n_small <= 16.
double verify_privacy_exhaustive(uint32_t n_small, double p);

namespace detail {
/// Unchecked randomize used by the test harness (allows p = 0 and other
/// out-of-precondition values).
NoisySketch randomize_with_p(const KorSketch& sketch, double p,
                             double epsilon_eff, std::mt19937_64& rng);
}  // namespace detail

}  // namespace kor
