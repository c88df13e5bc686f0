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

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_set>
#include <vector>

#include <doctest.h>

#include "kor/errors.hpp"
#include "kor/hashing.hpp"

using namespace kor;

namespace {

SketchParams test_params(uint64_t seed_value = 99) {
  return derive_params(1 << 16, 1.0, 0.25, ExplicitSizing{256},
                       Seed::from_u64(seed_value));
}

std::vector<uint64_t> random_set(uint64_t universe, size_t count,
                                 std::mt19937_64& rng) {
  std::unordered_set<uint64_t> seen;
  std::vector<uint64_t> out;
  while (out.size() < count) {
    const uint64_t id = 1 + rng() % universe;
    if (seen.insert(id).second) out.push_back(id);
  }
  return out;
}

std::vector<uint64_t> symmetric_difference(std::vector<uint64_t> a,
                                           std::vector<uint64_t> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<uint64_t> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(out));
  return out;
}

uint64_t hamming(const BitMatrix& a, const BitMatrix& b) {
  BitMatrix d = a;
  d.xor_with(b);
  return d.popcount();
}

}  // namespace

TEST_SUITE_BEGIN("sketch");

TEST_CASE("empty set gives the zero matrix") {
  const auto params = test_params();
  const KorSketch s = build({}, WeightTable::uniform(), params);
  CHECK(s.bits.popcount() == 0);
  CHECK(s == empty_sketch(params));
}

TEST_CASE("toggling every element of a set again cancels it") {
  const auto params = test_params();
  const auto weights = WeightTable::uniform();
  std::mt19937_64 rng(1);
  const auto ids = random_set(params.universe_size, 500, rng);
  KorSketch s = build(ids, weights, params);
  for (uint64_t id : ids) s = update(s, id, weights, params);
  CHECK(s.bits.popcount() == 0);
}

TEST_CASE("singleton sets exactly one bit at its cell") {
  const auto params = test_params();
  const HashOracle oracle(params.seed, params.buckets_per_level,
                          params.num_levels);
  // Find an id sampled at level 0 under this seed.
  uint64_t id = 0;
  for (uint64_t j = 1; j < 100; ++j) {
    if (oracle.level(j, 1.0) == 0) {
      id = j;
      break;
    }
  }
  REQUIRE(id != 0);
  const KorSketch s = build(std::vector<uint64_t>{id}, WeightTable::uniform(),
                            params);
  CHECK(s.bits.popcount() == 1);
  CHECK(s.bits.get(0, oracle.bucket(id)));
}

TEST_CASE("xor is an involution with identity") {
  const auto params = test_params();
  std::mt19937_64 rng(2);
  const auto ids = random_set(params.universe_size, 300, rng);
  const KorSketch s = build(ids, WeightTable::uniform(), params);
  CHECK(xor_sketches(s, s).bits.popcount() == 0);
  CHECK(xor_sketches(s, empty_sketch(params)) == s);
}

TEST_CASE("exact linearity: build(A) xor build(B) == build(A sym-diff B)") {
  const auto weights = WeightTable::uniform();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    const auto params = test_params(rng());
    const auto a = random_set(params.universe_size, 200 + rng() % 200, rng);
    const auto b = random_set(params.universe_size, 200 + rng() % 200, rng);
    const KorSketch sab = xor_sketches(build(a, weights, params),
                                       build(b, weights, params));
    const KorSketch sd = build(symmetric_difference(a, b), weights, params);
    CHECK(sab == sd);
  }
}

TEST_CASE("linearity holds with non-uniform weights") {
  std::mt19937_64 rng(4);
  WeightTable weights = WeightTable::strict();
  const auto params = test_params(17);
  std::vector<uint64_t> pool;
  for (uint64_t j = 1; j <= 2000; ++j) {
    weights.insert(j, std::ldexp(static_cast<double>((rng() >> 11) | 1), -53));
    pool.push_back(j);
  }
  std::shuffle(pool.begin(), pool.end(), rng);
  const std::vector<uint64_t> a(pool.begin(), pool.begin() + 700);
  const std::vector<uint64_t> b(pool.begin() + 400, pool.begin() + 1100);
  const KorSketch sab =
      xor_sketches(build(a, weights, params), build(b, weights, params));
  CHECK(sab == build(symmetric_difference(a, b), weights, params));
}

TEST_CASE("update is a self-inverse single-bit toggle") {
  const auto params = test_params();
  const auto weights = WeightTable::uniform();
  std::mt19937_64 rng(5);
  const auto ids = random_set(params.universe_size, 100, rng);
  const KorSketch s = build(ids, weights, params);
  for (uint64_t id = 500; id < 520; ++id) {
    const KorSketch once = update(s, id, weights, params);
    CHECK(hamming(s.bits, once.bits) <= 1);
    CHECK(update(once, id, weights, params) == s);
  }
  // update on the empty sketch equals build of the singleton
  CHECK(update(empty_sketch(params), 42, weights, params) ==
        build(std::vector<uint64_t>{42}, weights, params));
}

TEST_CASE("neighbor sensitivity is at most one bit") {
  const auto weights = WeightTable::uniform();
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 25; ++trial) {
    const auto params = test_params(rng());
    auto ids = random_set(params.universe_size, 300, rng);
    const uint64_t z = ids.back();
    ids.pop_back();
    const KorSketch without = build(ids, weights, params);
    ids.push_back(z);
    const KorSketch with = build(ids, weights, params);
    CHECK(hamming(without.bits, with.bits) <= 1);
  }
}

TEST_CASE("build is order-independent") {
  const auto params = test_params();
  const auto weights = WeightTable::uniform();
  std::mt19937_64 rng(7);
  auto ids = random_set(params.universe_size, 400, rng);
  const KorSketch a = build(ids, weights, params);
  std::shuffle(ids.begin(), ids.end(), rng);
  CHECK(build(ids, weights, params) == a);
}

TEST_CASE("errors: duplicates, unknown ids, family mismatch") {
  const auto params = test_params();
  const std::vector<uint64_t> dup{5, 9, 5};
  CHECK_THROWS_AS(build(dup, WeightTable::uniform(), params),
                  DuplicateElement);

  WeightTable strict = WeightTable::strict();
  strict.insert(1, 0.5);
  const std::vector<uint64_t> unknown{1, 2};
  CHECK_THROWS_AS(build(unknown, strict, params), UnknownElement);

  const std::vector<uint64_t> outside{params.universe_size + 1};
  CHECK_THROWS_AS(build(outside, WeightTable::uniform(), params),
                  UnknownElement);

  const auto other = test_params(12345);
  CHECK_THROWS_AS(xor_sketches(build({}, WeightTable::uniform(), params),
                               build({}, WeightTable::uniform(), other)),
                  ParamsMismatch);
}

TEST_CASE("duplicate detection also fires on large (partitioned) inputs") {
  const auto params = test_params();
  std::vector<uint64_t> ids(20000);
  std::iota(ids.begin(), ids.end(), 1);
  CHECK(build(ids, WeightTable::uniform(), params).bits.bit_count() ==
        params.sketch_bits());
  ids[17000] = ids[3];
  CHECK_THROWS_AS(build(ids, WeightTable::uniform(), params),
                  DuplicateElement);
}

TEST_CASE("digest binds every family parameter") {
  const auto base = test_params();
  auto changed = base;
  changed.epsilon = 2.0;
  CHECK(params_digest(base) != params_digest(changed));
  auto reseeded = base;
  reseeded.seed = Seed::from_u64(1000);
  CHECK(params_digest(base) != params_digest(reseeded));
  CHECK(params_digest(base) == params_digest(test_params()));
}

TEST_SUITE_END();
