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

namespace kor {

/// L x n bit matrix over GF(2), stored level-major and packed into 64-bit
/// words per level so per-level popcounts run on whole words.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(uint16_t levels, uint32_t buckets);

  void toggle(uint32_t level, uint32_t bucket);
  bool get(uint32_t level, uint32_t bucket) const;
  void set(uint32_t level, uint32_t bucket, bool value);

  /// Entrywise XOR; shapes must match (checked by the caller).
  void xor_with(const BitMatrix& other);

  uint64_t popcount_level(uint32_t level) const;
  uint64_t popcount() const;

  uint16_t levels() const { return levels_; }
  uint32_t buckets() const { return buckets_; }
  uint64_t bit_count() const {
    return static_cast<uint64_t>(levels_) * buckets_;
  }

  bool operator==(const BitMatrix&) const = default;

  /// Packs into ceil(L*n/8) bytes: one continuous bit stream, level-major
  /// then bucket order, little-endian within each byte, pad bits zero.
  std::vector<uint8_t> to_bytes() const;
  static BitMatrix from_bytes(uint16_t levels, uint32_t buckets,
                              const std::vector<uint8_t>& bytes);

  const std::vector<uint64_t>& words() const { return words_; }
  std::vector<uint64_t>& words() { return words_; }
  uint32_t words_per_level() const { return words_per_level_; }

 private:
  uint16_t levels_ = 0;
  uint32_t buckets_ = 0;
  uint32_t words_per_level_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace kor
