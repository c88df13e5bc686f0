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
#include <vector>

#include "kor/privacy.hpp"

namespace kor {

/// Per-level ones counts Z_i = popcount of level row i.
struct LevelCounts {
  std::vector<uint32_t> z;
};

enum class EstimateStatus : uint8_t {
  kConfident,
  kBelowThresholdZero,
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct EstimationResult {
  double estimate = 0.0;
  Interval interval;
  EstimateStatus status = EstimateStatus::kBelowThresholdZero;
  LevelCounts level_counts;
  // Diagnostics.
  double p_eff = 0.0;
  double epsilon_eff = 0.0;
  double gamma_used = 0.0;
  double eta_used = 0.0;
  bool disjoint_levels = false;  // some pair of level intervals was disjoint

  bool confident() const { return status == EstimateStatus::kConfident; }
};

/// Four set-algebra estimates derived from two private set weights and a
/// symmetric-difference estimate. union_weight + intersection equals
/// wA + wB exactly before clamping; clamped records the fields forced up
/// to zero.
struct SetAlgebraEstimates {
  double union_weight = 0.0;
  double intersection = 0.0;
  double a_minus_b = 0.0;
  double b_minus_a = 0.0;
  bool clamped = false;
};

/// Per-level popcounts of the sketch rows; O(tau) word operations.
LevelCounts count_ones(const BitMatrix& bits);

/// The per-level estimate interval: [0, u] when Z_i >= (1-gamma) n/2,
/// otherwise [2^i n ln((1-2p)/(1 - 2Z_i/((1+gamma) n))),
///            2^i n ln((1-2p)/(1 - 2Z_i/((1-gamma) n)))]
/// with both ends clamped into [0, u].
Interval level_interval_with_slack(uint32_t z, uint32_t level,
                                   const SketchParams& params, double p_eff,
                                   double gamma);

/// Same, with the slack the estimator would actually use at this p_eff.
Interval level_interval(uint32_t z, uint32_t level, const SketchParams& params,
                        double p_eff);

/// Intersects the level intervals and accepts the midpoint when the
/// intersection is nonempty, bounded away from zero, and its endpoints are
/// within a factor (1 + eta); otherwise reports zero (additive error at
/// most order n in that regime).
EstimationResult estimate(const NoisySketch& sketch,
                          const SketchParams& params);

/// merge(a, b) followed by estimate() at the composed flip probability.
EstimationResult estimate_symmetric_difference(const NoisySketch& a,
                                               const NoisySketch& b,
                                               const SketchParams& params);

/// union = (wA + wB + d)/2, intersection = wA + wB - union,
/// a_minus_b = (wA + d - wB)/2, b_minus_a = (wB + d - wA)/2, where d is the
/// symmetric-difference estimate; negatives clamp to zero with a flag.
SetAlgebraEstimates set_algebra(const PrivateWeight& weight_a,
                                const PrivateWeight& weight_b,
                                const EstimationResult& symdiff);

namespace detail {
/// Estimation on raw bits at an explicit flip probability; the clean-sketch
/// test path uses this with p_eff ~ 0.
EstimationResult estimate_bits(const BitMatrix& bits,
                               const SketchParams& params, double p_eff,
                               double epsilon_eff);
}  // namespace detail

}  // namespace kor
