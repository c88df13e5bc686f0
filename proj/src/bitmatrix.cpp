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

#include "kor/bitmatrix.hpp"

#include <bit>
#include <cassert>

#include "kor/errors.hpp"

namespace kor {

BitMatrix::BitMatrix(uint16_t levels, uint32_t buckets)
    : levels_(levels),
      buckets_(buckets),
      words_per_level_((buckets + 63) / 64),
      words_(static_cast<size_t>(levels) * words_per_level_, 0) {}

void BitMatrix::toggle(uint32_t level, uint32_t bucket) {
  assert(level < levels_ && bucket < buckets_);
  words_[static_cast<size_t>(level) * words_per_level_ + bucket / 64] ^=
      uint64_t{1} << (bucket % 64);
}

bool BitMatrix::get(uint32_t level, uint32_t bucket) const {
  assert(level < levels_ && bucket < buckets_);
  return (words_[static_cast<size_t>(level) * words_per_level_ + bucket / 64] >>
          (bucket % 64)) &
         1;
}

void BitMatrix::set(uint32_t level, uint32_t bucket, bool value) {
  if (get(level, bucket) != value) toggle(level, bucket);
}

void BitMatrix::xor_with(const BitMatrix& other) {
  assert(levels_ == other.levels_ && buckets_ == other.buckets_);
  for (size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
}

uint64_t BitMatrix::popcount_level(uint32_t level) const {
  assert(level < levels_);
  uint64_t total = 0;
  const size_t base = static_cast<size_t>(level) * words_per_level_;
  for (uint32_t w = 0; w < words_per_level_; ++w) {
    total += static_cast<uint64_t>(std::popcount(words_[base + w]));
  }
  return total;
}

uint64_t BitMatrix::popcount() const {
  uint64_t total = 0;
  for (uint16_t i = 0; i < levels_; ++i) total += popcount_level(i);
  return total;
}

std::vector<uint8_t> BitMatrix::to_bytes() const {
  std::vector<uint8_t> out((bit_count() + 7) / 8, 0);
  uint64_t pos = 0;
  for (uint16_t i = 0; i < levels_; ++i) {
    for (uint32_t b = 0; b < buckets_; ++b, ++pos) {
      if (get(i, b)) out[pos >> 3] |= static_cast<uint8_t>(1u << (pos & 7));
    }
  }
  return out;
}

BitMatrix BitMatrix::from_bytes(uint16_t levels, uint32_t buckets,
                                const std::vector<uint8_t>& bytes) {
  BitMatrix m(levels, buckets);
  const uint64_t expected = (m.bit_count() + 7) / 8;
  if (bytes.size() != expected) {
    throw LengthMismatch("payload has " + std::to_string(bytes.size()) +
                         " bytes, expected " + std::to_string(expected));
  }
  // Trailing pad bits must be zero for a canonical encoding.
  const uint64_t bits = m.bit_count();
  for (uint64_t pos = bits; pos < bytes.size() * 8; ++pos) {
    if ((bytes[pos >> 3] >> (pos & 7)) & 1) {
      throw LengthMismatch("nonzero padding bits in payload");
    }
  }
  uint64_t pos = 0;
  for (uint16_t i = 0; i < levels; ++i) {
    for (uint32_t b = 0; b < buckets; ++b, ++pos) {
      if ((bytes[pos >> 3] >> (pos & 7)) & 1) m.toggle(i, b);
    }
  }
  return m;
}

}  // namespace kor
