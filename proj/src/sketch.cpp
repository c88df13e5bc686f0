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

#include "kor/sketch.hpp"

#include <sodium.h>

#include <bit>
#include <string>
#include <vector>

#include "kor/errors.hpp"
#include "kor/hashing.hpp"
#include "kor/serialize.hpp"

namespace kor {

ParamsDigest params_digest(const SketchParams& params) {
  const std::vector<uint8_t> header = detail::encode_params_header(params);
  ParamsDigest digest;
  crypto_hash_sha256(digest.data(), header.data(), header.size());
  return digest;
}

KorSketch empty_sketch(const SketchParams& params) {
  KorSketch s;
  s.digest = params_digest(params);
  s.bits = BitMatrix(params.num_levels, params.buckets_per_level);
  return s;
}

namespace {

void check_element(uint64_t element, const SketchParams& params) {
  if (element < 1 || element > params.universe_size) {
    throw UnknownElement("id " + std::to_string(element) +
                         " outside universe [1.." +
                         std::to_string(params.universe_size) + "]");
  }
}

void toggle_element(KorSketch& s, const HashOracle& oracle, uint64_t element,
                    const WeightTable& weights) {
  const double w = weights.weight_of(element);
  if (const auto lvl = oracle.level(element, w)) {
    s.bits.toggle(*lvl, oracle.bucket(element));
  }
}

uint64_t mix64(uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Flat linear-probing set for duplicate detection. Ids are >= 1, so 0 marks
// an empty slot. probe_shift selects which mixed bits seed the probe so a
// partitioned caller can key partitions off the low bits.
class DedupTable {
 public:
  explicit DedupTable(size_t expected, unsigned probe_shift = 0)
      : probe_shift_(probe_shift),
        mask_(std::bit_ceil(std::max<size_t>(16, expected * 2)) - 1) {
    slots_.assign(mask_ + 1, 0);
  }

  bool insert(uint64_t id) {
    size_t pos = (mix64(id) >> probe_shift_) & mask_;
    while (slots_[pos] != 0) {
      if (slots_[pos] == id) return false;
      pos = (pos + 1) & mask_;
    }
    slots_[pos] = id;
    return true;
  }

 private:
  unsigned probe_shift_;
  size_t mask_;
  std::vector<uint64_t> slots_;
};

// Rejects repeated ids in time linear in the input. Large inputs are
// partitioned by a mixed hash so each probe table stays cache-resident
// instead of degrading into one DRAM-sized table.
void check_no_duplicates(std::span<const uint64_t> set) {
  const size_t m = set.size();
  constexpr size_t kPartThreshold = 1 << 14;
  const auto fail = [](uint64_t id) {
    throw DuplicateElement("id " + std::to_string(id) +
                           " appears more than once");
  };
  if (m <= kPartThreshold) {
    DedupTable table(m);
    for (uint64_t id : set) {
      if (!table.insert(id)) fail(id);
    }
    return;
  }
  constexpr size_t kParts = 256;
  std::vector<std::vector<uint64_t>> parts(kParts);
  for (auto& p : parts) p.reserve(2 * m / kParts);
  for (uint64_t id : set) parts[mix64(id) & (kParts - 1)].push_back(id);
  for (const auto& p : parts) {
    DedupTable table(p.size(), 8);
    for (uint64_t id : p) {
      if (!table.insert(id)) fail(id);
    }
  }
}

}  // namespace

KorSketch build(std::span<const uint64_t> set, const WeightTable& weights,
                const SketchParams& params) {
  check_no_duplicates(set);
  KorSketch s = empty_sketch(params);
  const HashOracle oracle(params.seed, params.buckets_per_level,
                          params.num_levels);
  for (uint64_t element : set) {
    check_element(element, params);
    toggle_element(s, oracle, element, weights);
  }
  return s;
}

KorSketch xor_sketches(const KorSketch& a, const KorSketch& b) {
  if (a.digest != b.digest) {
    throw ParamsMismatch("cannot xor sketches from different families");
  }
  KorSketch out = a;
  out.bits.xor_with(b.bits);
  return out;
}

KorSketch update(const KorSketch& sketch, uint64_t element,
                 const WeightTable& weights, const SketchParams& params) {
  if (sketch.digest != params_digest(params)) {
    throw ParamsMismatch("sketch does not belong to the given params");
  }
  check_element(element, params);
  KorSketch out = sketch;
  const HashOracle oracle(params.seed, params.buckets_per_level,
                          params.num_levels);
  toggle_element(out, oracle, element, weights);
  return out;
}

}  // namespace kor
