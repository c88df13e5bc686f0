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
#include <span>

#include "kor/estimator.hpp"
#include "kor/hashing.hpp"
#include "kor/sketch.hpp"

namespace kor {

/// Streaming (multiset) variant: every occurrence of an item is kept with
/// an independent fair coin before touching the sketch, so duplicates no
/// longer cancel deterministically over GF(2). An element occurring any
/// number of times c >= 1 ends up present with probability exactly 1/2,
/// which is why merged pre-sampled sketches estimate the union at twice the
/// base estimator.
class PreSampledSketch {
 public:
  explicit PreSampledSketch(const SketchParams& params);

  /// Feeds one occurrence. The coin comes from the caller's RNG stream,
  /// never from a hash of the element: identical items must be treated
  /// independently per occurrence.
  void insert(uint64_t element, const WeightTable& weights,
              std::mt19937_64& rng);

  const KorSketch& inner() const { return inner_; }
  uint64_t occurrences_seen() const { return occurrences_; }
  uint64_t occurrences_kept() const { return kept_; }
  const SketchParams& params() const { return params_; }

 private:
  SketchParams params_;
  HashOracle oracle_;
  KorSketch inner_;
  uint64_t occurrences_ = 0;
  uint64_t kept_ = 0;
};

/// Merges two noisy pre-sampled sketches and runs the estimator at the
/// composed flip probability, scaling the point estimate and the interval
/// endpoints by 2 (pre-sampling halves every element's level probability).
/// Requires equal digests and equal per-party noise levels.
EstimationResult union_estimate(const NoisySketch& a, const NoisySketch& b,
                                const SketchParams& params);

struct TwoPartyTrialRow {
  uint32_t trial = 0;
  double exact_union = 0.0;
  double estimate = 0.0;
  double rel_error = 0.0;
  EstimateStatus status = EstimateStatus::kBelowThresholdZero;
};

struct TwoPartyReport {
  std::vector<TwoPartyTrialRow> rows;
  double mean_rel_error = 0.0;
  double stddev_rel_error = 0.0;
  double build_ms = 0.0;
  double noise_ms = 0.0;
  double estimate_ms = 0.0;
};

/// Per trial: build both pre-sampled sketches under a fresh shared seed,
/// noise each at epsilon, merge, union-estimate; errors are measured
/// against the exact union weight of the two streams.
TwoPartyReport simulate_two_party(std::span<const uint64_t> stream_a,
                                  std::span<const uint64_t> stream_b,
                                  const WeightTable& weights,
                                  const SketchParams& params, double epsilon,
                                  uint32_t trials, uint64_t rng_seed);

/// Same params with a different shared seed (digest changes accordingly).
SketchParams with_seed(const SketchParams& params, const Seed& seed);

}  // namespace kor
