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

#include "kor/streaming.hpp"

#include <chrono>
#include <cmath>
#include <string>
#include <unordered_set>
#include <vector>

#include "kor/errors.hpp"

namespace kor {

PreSampledSketch::PreSampledSketch(const SketchParams& params)
    : params_(params),
      oracle_(params.seed, params.buckets_per_level, params.num_levels),
      inner_(empty_sketch(params)) {}

void PreSampledSketch::insert(uint64_t element, const WeightTable& weights,
                              std::mt19937_64& rng) {
  if (element < 1 || element > params_.universe_size) {
    throw UnknownElement("id " + std::to_string(element) +
                         " outside universe [1.." +
                         std::to_string(params_.universe_size) + "]");
  }
  ++occurrences_;
  if (rng() & 1) return;  // occurrence dropped by the fair coin
  ++kept_;
  const double w = weights.weight_of(element);
  if (const auto lvl = oracle_.level(element, w)) {
    inner_.bits.toggle(*lvl, oracle_.bucket(element));
  }
}

EstimationResult union_estimate(const NoisySketch& a, const NoisySketch& b,
                                const SketchParams& params) {
  if (a.digest != b.digest) {
    throw ParamsMismatch("cannot combine sketches from different families");
  }
  if (a.noise.p_eff != b.noise.p_eff) {
    throw ParamsMismatch("union estimation needs both parties at one epsilon");
  }
  EstimationResult result = estimate(merge(a, b), params);
  result.estimate *= 2.0;
  result.interval.lo *= 2.0;
  result.interval.hi *= 2.0;
  return result;
}

SketchParams with_seed(const SketchParams& params, const Seed& seed) {
  SketchParams out = params;
  out.seed = seed;
  return out;
}

TwoPartyReport simulate_two_party(std::span<const uint64_t> stream_a,
                                  std::span<const uint64_t> stream_b,
                                  const WeightTable& weights,
                                  const SketchParams& params, double epsilon,
                                  uint32_t trials, uint64_t rng_seed) {
  using clock = std::chrono::steady_clock;
  const auto ms = [](clock::duration d) {
    return std::chrono::duration<double, std::milli>(d).count();
  };

  // Union weight over distinct ids of both streams.
  const double exact_union = [&] {
    std::unordered_set<uint64_t> distinct(stream_a.begin(), stream_a.end());
    distinct.insert(stream_b.begin(), stream_b.end());
    double total = 0.0;
    for (uint64_t id : distinct) total += weights.weight_of(id);
    return total;
  }();

  TwoPartyReport report;
  report.rows.reserve(trials);
  std::mt19937_64 rng(rng_seed);

  double sum = 0.0, sum_sq = 0.0;
  for (uint32_t t = 0; t < trials; ++t) {
    const SketchParams trial_params =
        with_seed(params, Seed::from_u64(rng()));

    const auto t0 = clock::now();
    PreSampledSketch sa(trial_params);
    for (uint64_t id : stream_a) sa.insert(id, weights, rng);
    PreSampledSketch sb(trial_params);
    for (uint64_t id : stream_b) sb.insert(id, weights, rng);
    const auto t1 = clock::now();
    const NoisySketch na = randomize_at(sa.inner(), epsilon, rng);
    const NoisySketch nb = randomize_at(sb.inner(), epsilon, rng);
    const auto t2 = clock::now();
    const EstimationResult est = union_estimate(na, nb, trial_params);
    const auto t3 = clock::now();

    report.build_ms += ms(t1 - t0);
    report.noise_ms += ms(t2 - t1);
    report.estimate_ms += ms(t3 - t2);

    TwoPartyTrialRow row;
    row.trial = t;
    row.exact_union = exact_union;
    row.estimate = est.estimate;
    row.rel_error = exact_union > 0.0
                        ? std::abs(est.estimate - exact_union) / exact_union
                        : est.estimate;
    row.status = est.status;
    report.rows.push_back(row);
    sum += row.rel_error;
    sum_sq += row.rel_error * row.rel_error;
  }
  if (trials > 0) {
    report.mean_rel_error = sum / trials;
    const double var =
        std::max(0.0, sum_sq / trials -
                          report.mean_rel_error * report.mean_rel_error);
    report.stddev_rel_error = std::sqrt(var);
  }
  return report;
}

}  // namespace kor
