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
#include <span>
#include <vector>

#include "kor/params.hpp"
#include "kor/weights.hpp"

namespace kor {

// Reference implementations for calibration and tests. Nothing here is on
// the estimation hot path.

/// Closed-form per-level statistics of a weighted set.
struct ExactStats {
  std::vector<double> expected_l;  // E[L_i], clean ones count
  std::vector<double> expected_z;  // E[Z_i], noisy ones count
  std::vector<double> w_hat;       // 2^i n ln(1/prod(1 - w_j/(2^i n)))
  double exact_weight = 0.0;       // sum of the weights
};

/// Evaluates E[L_i] = (n/2)(1 - prod_j (1 - w_j/(2^i n))),
/// E[Z_i] = (n/2)(1 - (1-2p) prod_j (1 - w_j/(2^i n))) and the log-product
/// surrogate w_hat per level. Products are accumulated in log space.
ExactStats exact_expected_ones(std::span<const uint64_t> set,
                               const WeightTable& weights,
                               const SketchParams& params, double p);

struct McMoments {
  std::vector<double> mean;
  std::vector<double> variance;
  uint64_t trials = 0;
};

/// Empirical per-level moments of Z_i over independent (seed, noise) draws.
/// Each trial hashes the set under a fresh seed and then applies the noise
/// channel to the clean counts (Z_i = L_i - Bin(L_i, p) + Bin(n - L_i, p),
/// which matches per-bit flipping in distribution).
McMoments monte_carlo_Z(std::span<const uint64_t> set,
                        const WeightTable& weights, const SketchParams& params,
                        double p, uint64_t trials, uint64_t rng_seed);

/// Weight of the symmetric difference by direct set operations.
double exact_symdiff_weight(std::span<const uint64_t> a,
                            std::span<const uint64_t> b,
                            const WeightTable& weights);

/// Smallest c from the geometric grid {1, 2, 4, ...} such that the
/// end-to-end estimator at n = ceil(c log2(u) / (beta^2 eps^2)) reaches
/// relative error <= beta in at least target_success of the trials on
/// synthetic sets of weight n, 4n and 16n. The grid stops once 16 n(c)
/// exceeds u; throws CalibrationFailed when no point passes.
double calibrate_practical_c(uint64_t universe_size, double epsilon,
                             double beta, double target_success,
                             uint32_t trials, uint64_t rng_seed);

}  // namespace kor
