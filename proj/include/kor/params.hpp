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

#include <array>
#include <cstdint>
#include <string>
#include <variant>

namespace kor {

/// 128-bit opaque seed shared by cooperating parties. The seed fully
/// determines the bucket and level hash streams, so two parties holding the
/// same seed assign every element the same (level, bucket) cell.
struct Seed {
  std::array<uint8_t, 16> bytes{};

  bool operator==(const Seed&) const = default;

  /// Parses up to 32 hex digits (left-padded with zeros to 128 bits).
  static Seed from_hex(const std::string& hex);
  std::string to_hex() const;

  /// Convenience seed for tests: expands a 64-bit value.
  static Seed from_u64(uint64_t v);
};

struct StrictSizing {};
struct PracticalSizing {
  double c = 8.0;
};
struct ExplicitSizing {
  uint32_t n = 2;
};

/// How the per-level bucket count n is chosen.
using SizingPolicy = std::variant<StrictSizing, PracticalSizing, ExplicitSizing>;

/// All derived constants governing one sketch family. Immutable after
/// construction; two sketches interoperate only if every field (including
/// the seed) matches, which is enforced by a digest over this struct.
struct SketchParams {
  uint64_t universe_size = 0;    // u; element ids are 1..u
  uint16_t num_levels = 0;       // L = ceil(log2(u))
  uint32_t buckets_per_level = 0;  // n
  double epsilon = 0.0;          // per-party privacy budget
  double beta = 0.0;             // target relative error, in (0,1)
  double flip_prob = 0.0;        // p = 1/(2+epsilon)
  double gamma = 0.0;            // concentration slack used in intervals
  double eta = 0.0;              // interval-width acceptance threshold
  Seed seed;

  uint64_t sketch_bits() const {
    return static_cast<uint64_t>(num_levels) * buckets_per_level;
  }

  bool operator==(const SketchParams&) const = default;
};

/// Derives and validates every constant of a sketch family from (u, eps,
/// beta) and a sizing policy. Deterministic: identical inputs yield
/// bit-identical SketchParams. Throws InvalidParams when an invariant fails
/// (e.g. beta <= 1/n once n is fixed).
SketchParams derive_params(uint64_t universe_size, double epsilon, double beta,
                           const SizingPolicy& sizing, const Seed& seed);

/// Smallest n satisfying exp(-(beta-1/n)^2 eps^2 n / (20*4^3*(7e^3)^2*108))
/// < 1/u^2, which keeps the union-bound failure probability below
/// 6*log(u)/u^2. Found by expanding search plus bisection; the returned n
/// satisfies the inequality and n-1 does not.
uint64_t strict_n(uint64_t universe_size, double epsilon, double beta);

/// n = ceil(c * log2(u) / (beta^2 * epsilon^2)).
uint64_t practical_n(uint64_t universe_size, double epsilon, double beta,
                     double c);

uint16_t levels_for_universe(uint64_t universe_size);

// --- Slack derivation -------------------------------------------------------
//
// The interval machinery needs a concentration slack gamma and an acceptance
// threshold eta. The worst-case analysis pins gamma below two caps and
// derives eta from it in closed form; those values are what SketchParams
// stores. They only give the estimator useful behaviour once n is far past
// any desk-scale size, so estimation uses effective_slack(), which widens
// gamma to the binomial concentration floor of the actual (n, p) and picks
// the acceptance threshold from the interval-ratio geometry. See
// interval_ratio_bound() for the exact rule.

/// (beta - 1/n)(1 - 2p) / (7 e^3).
double gamma_cap_accuracy(double beta, uint64_t n, double p);

/// 1 / (2 e^3 / (1 - 2p) - 1).
double gamma_cap_interval(double p);

/// eta = 6 g (X - 1) / (1 + g - 2 g X) with X = e^3 / (1 - 2p).
/// Requires g below gamma_cap_interval(p) so the denominator stays positive.
double eta_from_gamma(double g, double p);

struct SlackPair {
  double gamma = 0.0;
  double eta = 0.0;
};

/// The closed-form pair stored in SketchParams: gamma at 0.999 times the
/// smaller cap, eta from eta_from_gamma.
SlackPair theory_slack(double beta, uint64_t n, double p);

/// Concentration floor 18 (1 - 2p) / sqrt(n), clamped to [0, 0.49].
double gamma_concentration_floor(uint64_t n, double p);

/// Worst-case ratio between the interval endpoints of a level whose scaled
/// weight theta = ||w||_1 / (2^i n) sits at the given value, with the counts
/// at the edge of their (1 +/- g) band. Infinite when the level cannot be
/// resolved at this slack.
double interval_ratio_bound(double theta, double g, double p);

/// Slack actually used by the estimator for a sketch with effective flip
/// probability p_eff: the theory pair when its gamma already dominates the
/// concentration floor, otherwise the floor gamma with an acceptance
/// threshold placed between the ratio bounds of an in-window level
/// (theta = 1) and of the strongest level of a below-threshold set
/// (theta = 1/4).
SlackPair effective_slack(double beta, uint64_t n, double p_eff);

std::string describe(const SketchParams& p);

}  // namespace kor
