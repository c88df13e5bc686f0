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

#include "kor/oracle.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

#include "kor/bitmatrix.hpp"
#include "kor/errors.hpp"
#include "kor/estimator.hpp"
#include "kor/hashing.hpp"
#include "kor/privacy.hpp"
#include "kor/sketch.hpp"

namespace kor {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Seed seed_from_rng(std::mt19937_64& rng) {
  Seed s;
  for (int half = 0; half < 2; ++half) {
    const uint64_t v = rng();
    for (int i = 0; i < 8; ++i) {
      s.bytes[8 * half + i] = static_cast<uint8_t>(v >> (8 * i));
    }
  }
  return s;
}

}  // namespace

ExactStats exact_expected_ones(std::span<const uint64_t> set,
                               const WeightTable& weights,
                               const SketchParams& params, double p) {
  const uint16_t levels = params.num_levels;
  const double n = static_cast<double>(params.buckets_per_level);
  ExactStats stats;
  stats.expected_l.assign(levels, 0.0);
  stats.expected_z.assign(levels, 0.0);
  stats.w_hat.assign(levels, 0.0);

  std::vector<double> log_prod(levels, 0.0);
  for (uint64_t id : set) {
    const double w = weights.weight_of(id);
    if (!(w > 0.0 && w <= 1.0)) throw InvalidWeight("weight outside (0,1]");
    stats.exact_weight += w;
    for (uint16_t i = 0; i < levels; ++i) {
      log_prod[i] += std::log1p(-w / std::ldexp(n, i));
    }
  }
  for (uint16_t i = 0; i < levels; ++i) {
    const double prod = std::exp(log_prod[i]);
    stats.expected_l[i] = 0.5 * n * (1.0 - prod);
    stats.expected_z[i] = 0.5 * n * (1.0 - (1.0 - 2.0 * p) * prod);
    stats.w_hat[i] = -std::ldexp(n, i) * log_prod[i];
  }
  return stats;
}

McMoments monte_carlo_Z(std::span<const uint64_t> set,
                        const WeightTable& weights, const SketchParams& params,
                        double p, uint64_t trials, uint64_t rng_seed) {
  if (trials < 1) throw InvalidParams("monte_carlo_Z needs trials >= 1");
  const uint16_t levels = params.num_levels;
  const uint32_t n = params.buckets_per_level;

  std::vector<double> sum(levels, 0.0), sum_sq(levels, 0.0);
  std::vector<double> ws;
  ws.reserve(set.size());
  for (uint64_t id : set) ws.push_back(weights.weight_of(id));

  for (uint64_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(splitmix64(rng_seed ^ (t * 0x9e3779b97f4a7c15ULL)));
    const Seed trial_seed = seed_from_rng(rng);
    const HashOracle oracle(trial_seed, n, levels);
    BitMatrix bits(levels, n);
    for (size_t k = 0; k < set.size(); ++k) {
      if (const auto lvl = oracle.level(set[k], ws[k])) {
        bits.toggle(*lvl, oracle.bucket(set[k]));
      }
    }
    for (uint16_t i = 0; i < levels; ++i) {
      const auto ones = static_cast<uint32_t>(bits.popcount_level(i));
      uint32_t z = ones;
      if (p > 0.0) {
        z -= std::binomial_distribution<uint32_t>(ones, p)(rng);
        z += std::binomial_distribution<uint32_t>(n - ones, p)(rng);
      }
      sum[i] += z;
      sum_sq[i] += static_cast<double>(z) * z;
    }
  }

  McMoments m;
  m.trials = trials;
  m.mean.resize(levels);
  m.variance.resize(levels);
  for (uint16_t i = 0; i < levels; ++i) {
    m.mean[i] = sum[i] / static_cast<double>(trials);
    m.variance[i] =
        sum_sq[i] / static_cast<double>(trials) - m.mean[i] * m.mean[i];
  }
  return m;
}

double exact_symdiff_weight(std::span<const uint64_t> a,
                            std::span<const uint64_t> b,
                            const WeightTable& weights) {
  std::unordered_set<uint64_t> in_a(a.begin(), a.end());
  std::unordered_set<uint64_t> in_b(b.begin(), b.end());
  double total = 0.0;
  for (uint64_t id : in_a) {
    if (!in_b.count(id)) total += weights.weight_of(id);
  }
  for (uint64_t id : in_b) {
    if (!in_a.count(id)) total += weights.weight_of(id);
  }
  return total;
}

double calibrate_practical_c(uint64_t universe_size, double epsilon,
                             double beta, double target_success,
                             uint32_t trials, uint64_t rng_seed) {
  if (!(target_success > 0.5 && target_success < 1.0)) {
    throw InvalidParams("target_success must be in (0.5, 1)");
  }
  if (trials < 1) throw InvalidParams("calibration needs trials >= 1");

  std::vector<uint64_t> ids(universe_size);
  std::iota(ids.begin(), ids.end(), 1);
  const WeightTable weights = WeightTable::uniform();
  std::mt19937_64 rng(splitmix64(rng_seed));

  const uint32_t max_failures = static_cast<uint32_t>(
      std::floor((1.0 - target_success) * static_cast<double>(trials)));

  for (double c = 1.0;; c *= 2.0) {
    uint64_t n = 0;
    try {
      n = practical_n(universe_size, epsilon, beta, c);
    } catch (const InvalidParams&) {
      continue;  // grid point below the minimum bucket count
    }
    if (16 * n > universe_size) {
      throw CalibrationFailed(
          "no grid point reaches the target success rate before the largest "
          "calibration set exceeds the universe");
    }
    if (!(beta > 1.0 / static_cast<double>(n))) continue;

    bool c_ok = true;
    for (uint64_t size : {n, 4 * n, 16 * n}) {
      uint32_t failures = 0;
      for (uint32_t t = 0; t < trials && c_ok; ++t) {
        const SketchParams params =
            derive_params(universe_size, epsilon, beta, PracticalSizing{c},
                          seed_from_rng(rng));
        // Partial Fisher-Yates prefix: a fresh random m-subset per trial.
        for (uint64_t i = 0; i < size; ++i) {
          const uint64_t j =
              i + rng() % (universe_size - i);
          std::swap(ids[i], ids[j]);
        }
        const KorSketch clean =
            build(std::span(ids.data(), size), weights, params);
        const NoisySketch noisy = randomize(clean, params, rng);
        const EstimationResult est = estimate(noisy, params);
        const double rel = std::abs(est.estimate - static_cast<double>(size)) /
                           static_cast<double>(size);
        if (rel > beta) {
          ++failures;
          if (failures > max_failures) c_ok = false;
        }
      }
      if (!c_ok) break;
    }
    if (c_ok) return c;
  }
}

}  // namespace kor
