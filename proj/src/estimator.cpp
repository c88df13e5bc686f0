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

#include "kor/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "kor/errors.hpp"

namespace kor {

LevelCounts count_ones(const BitMatrix& bits) {
  LevelCounts counts;
  counts.z.resize(bits.levels());
  for (uint16_t i = 0; i < bits.levels(); ++i) {
    counts.z[i] = static_cast<uint32_t>(bits.popcount_level(i));
  }
  return counts;
}

namespace {

Interval interval_for_level(uint32_t z, uint32_t level, uint64_t universe,
                            uint32_t buckets, double p_eff, double gamma) {
  const double u = static_cast<double>(universe);
  const double n = static_cast<double>(buckets);
  if (static_cast<double>(z) >= (1.0 - gamma) * n / 2.0) {
    return {0.0, u};
  }
  // The branch guard keeps both denominators positive:
  // 1 - 2z/((1-gamma) n) > 0 exactly when z < (1-gamma) n / 2.
  const double scale = std::ldexp(n, static_cast<int>(level));  // 2^i n
  const double top = 1.0 - 2.0 * p_eff;
  const double lo_arg = 1.0 - 2.0 * z / ((1.0 + gamma) * n);
  const double hi_arg = 1.0 - 2.0 * z / ((1.0 - gamma) * n);
  double lo = scale * std::log(top / lo_arg);
  double hi = scale * std::log(top / hi_arg);
  hi = std::clamp(hi, 0.0, u);
  lo = std::clamp(lo, 0.0, hi);
  return {lo, hi};
}

}  // namespace

Interval level_interval_with_slack(uint32_t z, uint32_t level,
                                   const SketchParams& params, double p_eff,
                                   double gamma) {
  return interval_for_level(z, level, params.universe_size,
                            params.buckets_per_level, p_eff, gamma);
}

Interval level_interval(uint32_t z, uint32_t level, const SketchParams& params,
                        double p_eff) {
  const SlackPair slack =
      effective_slack(params.beta, params.buckets_per_level, p_eff);
  return level_interval_with_slack(z, level, params, p_eff, slack.gamma);
}

namespace detail {

EstimationResult estimate_bits(const BitMatrix& bits,
                               const SketchParams& params, double p_eff,
                               double epsilon_eff) {
  if (!(p_eff >= 0.0 && p_eff < 0.5)) {
    throw DegenerateNoise("effective flip probability must be in [0, 1/2)");
  }
  EstimationResult result;
  result.level_counts = count_ones(bits);
  result.p_eff = p_eff;
  result.epsilon_eff = epsilon_eff;

  const SlackPair slack =
      effective_slack(params.beta, params.buckets_per_level, p_eff);
  result.gamma_used = slack.gamma;
  result.eta_used = slack.eta;

  double lo = 0.0;
  double hi = static_cast<double>(params.universe_size);
  bool empty = false;
  for (uint16_t i = 0; i < params.num_levels; ++i) {
    const Interval iv = level_interval_with_slack(result.level_counts.z[i], i,
                                                  params, p_eff, slack.gamma);
    lo = std::max(lo, iv.lo);
    hi = std::min(hi, iv.hi);
    if (hi < lo) empty = true;
  }
  result.disjoint_levels = empty;

  // Accept only a nonempty intersection bounded away from zero whose
  // endpoints are within a factor (1 + eta); everything else maps to the
  // zero fallback (a ratio with lo = 0 is undefined and counts as failing).
  if (!empty && lo > 0.0 && hi <= (1.0 + slack.eta) * lo) {
    result.status = EstimateStatus::kConfident;
    result.interval = {lo, hi};
    result.estimate = 0.5 * (lo + hi);
  } else {
    result.status = EstimateStatus::kBelowThresholdZero;
    result.interval = {0.0, 0.0};
    result.estimate = 0.0;
  }
  return result;
}

}  // namespace detail

EstimationResult estimate(const NoisySketch& sketch,
                          const SketchParams& params) {
  if (sketch.digest != params_digest(params)) {
    throw ParamsMismatch("sketch does not belong to the given params");
  }
  return detail::estimate_bits(sketch.bits, params, sketch.noise.p_eff,
                               sketch.noise.epsilon_eff);
}

EstimationResult estimate_symmetric_difference(const NoisySketch& a,
                                               const NoisySketch& b,
                                               const SketchParams& params) {
  return estimate(merge(a, b), params);
}

SetAlgebraEstimates set_algebra(const PrivateWeight& weight_a,
                                const PrivateWeight& weight_b,
                                const EstimationResult& symdiff) {
  const double s = weight_a.value + weight_b.value;
  const double d = symdiff.estimate;
  SetAlgebraEstimates out;
  // union from the formula, intersection as the exact complement so that
  // union + intersection reproduces wA + wB bit-for-bit.
  const double uni = 0.5 * (s + d);
  const double inter = s - uni;
  const double ab = 0.5 * (weight_a.value - weight_b.value + d);
  const double ba = 0.5 * (weight_b.value - weight_a.value + d);
  out.clamped = uni < 0.0 || inter < 0.0 || ab < 0.0 || ba < 0.0;
  out.union_weight = std::max(0.0, uni);
  out.intersection = std::max(0.0, inter);
  out.a_minus_b = std::max(0.0, ab);
  out.b_minus_a = std::max(0.0, ba);
  return out;
}

}  // namespace kor
