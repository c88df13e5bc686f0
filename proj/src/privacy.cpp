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

#include "kor/privacy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "kor/errors.hpp"

namespace kor {

namespace detail {

NoisySketch randomize_with_p(const KorSketch& sketch, double p,
                             double epsilon_eff, std::mt19937_64& rng) {
  NoisySketch out;
  out.digest = sketch.digest;
  out.bits = sketch.bits;
  out.noise = NoiseState{p, epsilon_eff, 0};
  if (p <= 0.0) return out;
  std::bernoulli_distribution flip(p);
  const uint16_t levels = out.bits.levels();
  const uint32_t buckets = out.bits.buckets();
  for (uint16_t i = 0; i < levels; ++i) {
    for (uint32_t b = 0; b < buckets; ++b) {
      if (flip(rng)) out.bits.toggle(i, b);
    }
  }
  return out;
}

}  // namespace detail

NoisySketch randomize(const KorSketch& sketch, const SketchParams& params,
                      std::mt19937_64& rng) {
  if (sketch.digest != params_digest(params)) {
    throw ParamsMismatch("sketch does not belong to the given params");
  }
  const double p = params.flip_prob;
  const double lower = 1.0 / (std::exp(params.epsilon) + 1.0);
  if (!(p > lower && p < 0.5)) {
    throw PrivacyPreconditionViolated(
        "flip probability must lie in (1/(e^eps+1), 1/2)");
  }
  return detail::randomize_with_p(sketch, p, params.epsilon, rng);
}

NoisySketch randomize_at(const KorSketch& sketch, double epsilon,
                         std::mt19937_64& rng) {
  if (!(epsilon > 0.0)) {
    throw PrivacyPreconditionViolated("epsilon must be positive");
  }
  const double p = 1.0 / (2.0 + epsilon);
  return detail::randomize_with_p(sketch, p, epsilon, rng);
}

double compose_flip_prob(double p_a, double p_b) {
  return p_a * (1.0 - p_b) + p_b * (1.0 - p_a);
}

NoisySketch merge(const NoisySketch& a, const NoisySketch& b) {
  if (a.digest != b.digest) {
    throw ParamsMismatch("cannot merge sketches from different families");
  }
  NoisySketch out;
  out.digest = a.digest;
  out.bits = a.bits;
  out.bits.xor_with(b.bits);
  const double p_eff = compose_flip_prob(a.noise.p_eff, b.noise.p_eff);
  if (p_eff >= 0.5) {
    throw DegenerateNoise("composed flip probability reached 1/2");
  }
  out.noise.p_eff = p_eff;
  out.noise.epsilon_eff = 1.0 / p_eff - 2.0;
  out.noise.merge_count = a.noise.merge_count + b.noise.merge_count + 1;
  return out;
}

PrivateWeight laplace_weight(double total, double epsilon, double sensitivity,
                             std::mt19937_64& rng) {
  if (total < 0.0) throw InvalidParams("total weight must be >= 0");
  if (!(epsilon > 0.0)) throw InvalidParams("epsilon must be positive");
  if (!(sensitivity > 0.0 && sensitivity <= 1.0)) {
    throw InvalidParams("sensitivity must be in (0,1]");
  }
  const double scale = sensitivity / epsilon;
  // Inverse CDF on a 64-bit uniform, centered: u in (-1/2, 1/2).
  const uint64_t word = rng();
  const double u = (static_cast<double>(word) + 0.5) / 18446744073709551616.0 -
                   0.5;
  const double sign = u < 0.0 ? -1.0 : 1.0;
  const double noise = -scale * sign * std::log1p(-2.0 * std::abs(u));
  return PrivateWeight{total + noise, epsilon, sensitivity};
}

double verify_privacy_exhaustive(uint32_t n_small, double p) {
  if (n_small == 0 || n_small > 16) {
    throw InvalidParams("exhaustive verifier supports 1..16 bits");
  }
  if (!(p > 0.0 && p < 0.5)) throw InvalidParams("p must be in (0, 1/2)");
  // Neighbors differ in exactly one sketch entry; take y_A = 0...0 and
  // y_B = y_A with the first bit flipped. For outcome o the noise vectors
  // are phi = o and psi = o xor e0, each drawn iid Bernoulli(p).
  const uint32_t outcomes = 1u << n_small;
  double max_ratio = 0.0;
  for (uint32_t o = 0; o < outcomes; ++o) {
    const int r = std::popcount(o);
    const int r2 = std::popcount(o ^ 1u);
    const double pa = std::pow(p, r) * std::pow(1.0 - p, n_small - r);
    const double pb = std::pow(p, r2) * std::pow(1.0 - p, n_small - r2);
    max_ratio = std::max(max_ratio, pa / pb);
  }
  return max_ratio;
}

}  // namespace kor
