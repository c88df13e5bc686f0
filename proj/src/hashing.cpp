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

#include "kor/hashing.hpp"

#include <sodium.h>

#include <cmath>
#include <cstring>

#include "kor/errors.hpp"

namespace kor {

namespace {

constexpr uint8_t kBucketTag = 0x42;  // 'B'
constexpr uint8_t kLevelTag = 0x4c;   // 'L'

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw Error("libsodium failed to initialize");
}

}  // namespace

HashOracle::HashOracle(const Seed& seed, uint32_t buckets_per_level,
                       uint16_t num_levels)
    : seed_(seed), n_(buckets_per_level), levels_(num_levels) {
  ensure_sodium();
  if (n_ < 1) throw InvalidParams("oracle needs at least one bucket");
  if (levels_ < 1) throw InvalidParams("oracle needs at least one level");
}

uint64_t HashOracle::keyed_hash(uint8_t tag, uint64_t element) const {
  uint8_t msg[9];
  msg[0] = tag;
  for (int i = 0; i < 8; ++i) {
    msg[1 + i] = static_cast<uint8_t>(element >> (8 * i));
  }
  uint8_t out[crypto_shorthash_siphash24_BYTES];
  crypto_shorthash_siphash24(out, msg, sizeof(msg), seed_.bytes.data());
  uint64_t h = 0;
  for (int i = 7; i >= 0; --i) h = (h << 8) | out[i];
  return h;
}

uint32_t HashOracle::bucket(uint64_t element) const {
  const uint64_t h = keyed_hash(kBucketTag, element);
  // Multiply-high range reduction onto [0, n).
  return static_cast<uint32_t>(
      (static_cast<unsigned __int128>(h) * n_) >> 64);
}

uint64_t HashOracle::sample_word(uint64_t element) const {
  return keyed_hash(kLevelTag, element);
}

bool sample_at_most(uint64_t word, double weight, uint32_t level_shift) {
  // s = (word+1)/2^64 <= w/2^i  <=>  word+1 <= m * 2^(E + 64 - i)
  // for w = m * 2^E with m a 53-bit integer. Exact in integer arithmetic.
  const unsigned __int128 k1 = static_cast<unsigned __int128>(word) + 1;
  int exp2 = 0;
  const double frac = std::frexp(weight, &exp2);  // weight = frac * 2^exp2
  const auto mant = static_cast<uint64_t>(std::ldexp(frac, 53));
  const int shift = exp2 - 53 + 64 - static_cast<int>(level_shift);
  if (shift >= 0) {
    if (shift > 75) return true;  // threshold >= 2^64 >= word+1
    return k1 <= (static_cast<unsigned __int128>(mant) << shift);
  }
  const int down = -shift;
  if (down >= 53) return false;  // word+1 shifted up exceeds any 53-bit mant
  return (k1 << down) <= static_cast<unsigned __int128>(mant);
}

std::optional<uint32_t> level_for_sample(uint64_t word, double weight,
                                         uint16_t num_levels) {
  if (!(weight > 0.0 && weight <= 1.0)) {
    throw InvalidWeight("weight must be in (0,1]");
  }
  if (!sample_at_most(word, weight, 0)) return std::nullopt;  // s > w
  for (uint32_t i = 0; i < num_levels; ++i) {
    // Already know s <= w/2^i; level i iff s > w/2^{i+1}.
    if (!sample_at_most(word, weight, i + 1)) return i;
  }
  return std::nullopt;  // s <= w/2^L: below the deepest level
}

std::optional<uint32_t> HashOracle::level(uint64_t element,
                                          double weight) const {
  return level_for_sample(sample_word(element), weight, levels_);
}

double sampling_probability(uint32_t level, double weight) {
  return std::ldexp(weight, -static_cast<int>(level) - 1);
}

}  // namespace kor
