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
#include <optional>

#include "kor/params.hpp"

namespace kor {

/// Seeded stand-in for the random oracles behind the sketch: a bucket hash
/// into [n] and a subsampling value s(j) in (0,1], both keyed by the shared
/// 128-bit seed with disjoint domain tags. Deterministic per seed, so
/// cooperating parties assign every element the same (level, bucket) cell.
/// The hash function itself is never stored in a sketch, only the seed.
class HashOracle {
 public:
  HashOracle(const Seed& seed, uint32_t buckets_per_level, uint16_t num_levels);

  /// Bucket index in [0, n). Uniform over buckets under a random seed.
  uint32_t bucket(uint64_t element) const;

  /// Raw 64-bit subsampling word k; s(j) = (k+1)/2^64 in (0,1].
  uint64_t sample_word(uint64_t element) const;

  /// Level i in [0, L) with s(j) in (w/2^{i+1}, w/2^i], or nullopt when
  /// s(j) > w or s(j) <= w/2^L. The interval test is exact: open at the low
  /// end, closed at the high end, evaluated in integer arithmetic on
  /// k+1 vs w*2^{64-i}. Throws InvalidWeight unless 0 < w <= 1.
  std::optional<uint32_t> level(uint64_t element, double weight) const;

  uint32_t buckets_per_level() const { return n_; }
  uint16_t num_levels() const { return levels_; }

 private:
  uint64_t keyed_hash(uint8_t tag, uint64_t element) const;

  Seed seed_;
  uint32_t n_;
  uint16_t levels_;
};

/// w / 2^{i+1}: the probability that an element of weight w lands at level i.
/// Test/oracle helper.
double sampling_probability(uint32_t level, double weight);

/// Exact membership test for s = (word+1)/2^64 <= w / 2^i, used by level()
/// and exposed for tests.
bool sample_at_most(uint64_t word, double weight, uint32_t level_shift);

/// Level lookup for an explicit subsampling word (s = (word+1)/2^64).
std::optional<uint32_t> level_for_sample(uint64_t word, double weight,
                                         uint16_t num_levels);

}  // namespace kor
