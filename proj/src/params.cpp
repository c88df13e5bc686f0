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

#include "kor/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kor/errors.hpp"

namespace kor {

namespace {

constexpr double kE3 = 20.085536923187668;  // e^3
constexpr double kGammaMargin = 0.999;
// 20 * 4^3 * (7e^3)^2 * 108; the proof constant behind strict sizing.
const double kStrictConstant = 20.0 * 64.0 * 108.0 * (7.0 * kE3) * (7.0 * kE3);

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Seed Seed::from_hex(const std::string& hex) {
  if (hex.empty() || hex.size() > 32) {
    throw InvalidParams("seed must be 1..32 hex digits");
  }
  Seed s;
  // Right-align: treat the string as a big-endian 128-bit integer.
  size_t nibble = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it, ++nibble) {
    int d = hex_digit(*it);
    if (d < 0) throw InvalidParams("seed contains a non-hex character");
    size_t byte = 15 - nibble / 2;
    s.bytes[byte] |= static_cast<uint8_t>(d << (4 * (nibble % 2)));
  }
  return s;
}

std::string Seed::to_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out(32, '0');
  for (size_t i = 0; i < 16; ++i) {
    out[2 * i] = digits[bytes[i] >> 4];
    out[2 * i + 1] = digits[bytes[i] & 0xf];
  }
  return out;
}

Seed Seed::from_u64(uint64_t v) {
  Seed s;
  for (int i = 0; i < 8; ++i) {
    s.bytes[15 - i] = static_cast<uint8_t>(v >> (8 * i));
  }
  return s;
}

uint16_t levels_for_universe(uint64_t u) {
  if (u < 2) throw InvalidParams("universe size must be at least 2");
  uint16_t levels = 0;
  uint64_t span = 1;
  while (span < u) {
    // span < 2^63 is guaranteed here: u fits in 64 bits.
    span <<= 1;
    ++levels;
  }
  return levels;
}

double gamma_cap_accuracy(double beta, uint64_t n, double p) {
  return (beta - 1.0 / static_cast<double>(n)) * (1.0 - 2.0 * p) / (7.0 * kE3);
}

double gamma_cap_interval(double p) {
  return 1.0 / (2.0 * kE3 / (1.0 - 2.0 * p) - 1.0);
}

double eta_from_gamma(double g, double p) {
  const double x = kE3 / (1.0 - 2.0 * p);
  const double denom = 1.0 + g - 2.0 * g * x;
  if (denom <= 0.0) {
    throw InvalidParams("eta denominator not positive; gamma above its cap");
  }
  return 6.0 * g * (x - 1.0) / denom;
}

SlackPair theory_slack(double beta, uint64_t n, double p) {
  const double cap =
      std::min(gamma_cap_accuracy(beta, n, p), gamma_cap_interval(p));
  if (!(cap > 0.0)) {
    throw InvalidParams("gamma cap is not positive (beta <= 1/n?)");
  }
  const double g = kGammaMargin * cap;
  return {g, eta_from_gamma(g, p)};
}

double gamma_concentration_floor(uint64_t n, double p) {
  const double g = 18.0 * (1.0 - 2.0 * p) / std::sqrt(static_cast<double>(n));
  return std::clamp(g, 0.0, 0.49);
}

double interval_ratio_bound(double theta, double g, double p) {
  const double scale = 1.0 - 2.0 * p;
  const double xbar = scale * std::exp(-theta);
  if (xbar <= g) return std::numeric_limits<double>::infinity();
  const double den = std::log(scale * (1.0 + g) / (xbar + g));
  if (den <= 0.0) return std::numeric_limits<double>::infinity();
  const double num = std::log(scale * (1.0 - g) / (xbar - g));
  return num / den;
}

SlackPair effective_slack(double beta, uint64_t n, double p_eff) {
  const double floor = gamma_concentration_floor(n, p_eff);
  const double cap =
      std::min(gamma_cap_accuracy(beta, n, p_eff), gamma_cap_interval(p_eff));
  if (cap > 0.0 && kGammaMargin * cap >= floor) {
    return theory_slack(beta, n, p_eff);
  }
  const double g = floor;
  const double r1 = interval_ratio_bound(1.0, g, p_eff);
  if (!std::isfinite(r1)) {
    // n is too small to resolve even an in-window level; accept any
    // positive intersection and let the zero fallback do the rest.
    return {g, std::numeric_limits<double>::infinity()};
  }
  double rq = interval_ratio_bound(0.25, g, p_eff);
  if (!std::isfinite(rq)) rq = r1 * r1;
  const double threshold = std::pow(r1, 0.75) * std::pow(rq, 0.25);
  return {g, threshold - 1.0};
}

uint64_t practical_n(uint64_t u, double epsilon, double beta, double c) {
  if (!(c > 0.0)) throw InvalidParams("practical sizing constant must be > 0");
  const double lg = std::log2(static_cast<double>(u));
  const double n = std::ceil(c * lg / (beta * beta * epsilon * epsilon));
  if (!(n >= 2.0) || n > 9e18) throw InvalidParams("practical n out of range");
  return static_cast<uint64_t>(n);
}

namespace {

// exp(-(beta-1/n)^2 eps^2 n / C) < 1/u^2, rearranged to avoid under/overflow:
// (beta-1/n)^2 eps^2 n / C > 2 ln u.
bool strict_inequality_holds(uint64_t u, double epsilon, double beta, double n) {
  const double margin = beta - 1.0 / n;
  if (margin <= 0.0) return false;
  const double lhs = margin * margin * epsilon * epsilon * n / kStrictConstant;
  return lhs > 2.0 * std::log(static_cast<double>(u));
}

}  // namespace

uint64_t strict_n(uint64_t u, double epsilon, double beta) {
  // Expand to an upper bracket, then bisect to the smallest integer
  // satisfying the inequality (it is monotone in n once beta > 1/n).
  uint64_t hi = 16;
  while (!strict_inequality_holds(u, epsilon, beta, static_cast<double>(hi))) {
    if (hi > (uint64_t{1} << 60)) throw InvalidParams("strict n exceeds 2^60");
    hi *= 2;
  }
  uint64_t lo = hi > 16 ? hi / 2 : 0;  // known to fail (or n=0, which fails)
  while (hi - lo > 1) {
    const uint64_t mid = lo + (hi - lo) / 2;
    if (strict_inequality_holds(u, epsilon, beta, static_cast<double>(mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

SketchParams derive_params(uint64_t universe_size, double epsilon, double beta,
                           const SizingPolicy& sizing, const Seed& seed) {
  if (universe_size < 2) throw InvalidParams("universe size must be >= 2");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidParams("epsilon must be positive and finite");
  }
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidParams("beta must be in (0,1)");

  SketchParams out;
  out.universe_size = universe_size;
  out.num_levels = levels_for_universe(universe_size);
  out.epsilon = epsilon;
  out.beta = beta;
  out.flip_prob = 1.0 / (2.0 + epsilon);
  out.seed = seed;

  uint64_t n = 0;
  if (std::holds_alternative<StrictSizing>(sizing)) {
    n = strict_n(universe_size, epsilon, beta);
  } else if (const auto* prac = std::get_if<PracticalSizing>(&sizing)) {
    n = practical_n(universe_size, epsilon, beta, prac->c);
  } else {
    n = std::get<ExplicitSizing>(sizing).n;
  }
  if (n < 2) throw InvalidParams("bucket count must be >= 2");
  if (n > std::numeric_limits<uint32_t>::max()) {
    throw InvalidParams("bucket count exceeds 32 bits");
  }
  out.buckets_per_level = static_cast<uint32_t>(n);

  if (!(beta > 1.0 / static_cast<double>(n))) {
    throw InvalidParams("beta <= 1/n for the chosen bucket count");
  }
  // Privacy precondition from the randomized-response analysis: the derived
  // p = 1/(2+eps) always lies in (1/(e^eps+1), 1/2), but check explicitly.
  if (!(out.flip_prob > 1.0 / (std::exp(epsilon) + 1.0) &&
        out.flip_prob < 0.5)) {
    throw InvalidParams("flip probability outside (1/(e^eps+1), 1/2)");
  }

  const SlackPair slack = theory_slack(beta, n, out.flip_prob);
  if (!(slack.gamma > 0.0 && slack.gamma < 1.0)) {
    throw InvalidParams("gamma outside (0,1)");
  }
  if (!(slack.eta > 0.0) || !std::isfinite(slack.eta)) {
    throw InvalidParams("eta must be positive and finite");
  }
  out.gamma = slack.gamma;
  out.eta = slack.eta;
  return out;
}

std::string describe(const SketchParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "u=" << p.universe_size << " L=" << p.num_levels
     << " n=" << p.buckets_per_level << " tau=" << p.sketch_bits()
     << " epsilon=" << p.epsilon << " beta=" << p.beta << " p=" << p.flip_prob
     << " gamma=" << p.gamma << " eta=" << p.eta << " seed=" << p.seed.to_hex();
  return os.str();
}

}  // namespace kor
