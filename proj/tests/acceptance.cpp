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

// End-to-end verification binary: runs every release gate at its stated
// tolerance and prints one pass/fail line per gate. Exits nonzero when any
// gate fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <unordered_set>
#include <vector>

#include "kor/estimator.hpp"
#include "kor/hashing.hpp"
#include "kor/oracle.hpp"
#include "kor/params.hpp"
#include "kor/privacy.hpp"
#include "kor/serialize.hpp"
#include "kor/sketch.hpp"
#include "kor/streaming.hpp"

using namespace kor;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%s] %2d. %-28s %s (%.1fs)\n", pass ? "PASS" : "FAIL", index,
              name, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

std::vector<uint64_t> random_subset(std::vector<uint64_t>& pool, uint64_t count,
                                    std::mt19937_64& rng) {
  const uint64_t size = pool.size();
  for (uint64_t i = 0; i < count; ++i) {
    const uint64_t j = i + rng() % (size - i);
    std::swap(pool[i], pool[j]);
  }
  return {pool.begin(), pool.begin() + static_cast<long>(count)};
}

struct Fit {
  double slope = 0.0;
  double r2 = 0.0;
};

Fit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  const size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  Fit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (size_t i = 0; i < n; ++i) {
    const double pred = fit.slope * xs[i] + intercept;
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  fit.r2 = 1.0 - ss_res / ss_tot;
  return fit;
}

// ---------------------------------------------------------------------------

void criterion_1_linearity() {
  const auto start = clock_type::now();
  const WeightTable weights = WeightTable::uniform();
  std::mt19937_64 rng(101);
  std::vector<uint64_t> pool(1 << 16);
  std::iota(pool.begin(), pool.end(), 1);
  int failures = 0;
  for (int t = 0; t < 200; ++t) {
    const auto params = derive_params(1 << 16, 1.0, 0.25, ExplicitSizing{256},
                                      Seed::from_u64(rng()));
    const auto a = random_subset(pool, 200 + rng() % 1800, rng);
    const auto b = random_subset(pool, 200 + rng() % 1800, rng);
    std::vector<uint64_t> sd;
    {
      std::unordered_set<uint64_t> in_a(a.begin(), a.end());
      std::unordered_set<uint64_t> in_b(b.begin(), b.end());
      for (uint64_t id : a)
        if (!in_b.count(id)) sd.push_back(id);
      for (uint64_t id : b)
        if (!in_a.count(id)) sd.push_back(id);
    }
    const KorSketch lhs =
        xor_sketches(build(a, weights, params), build(b, weights, params));
    if (!(lhs == build(sd, weights, params))) ++failures;
  }
  const double secs = seconds_since(start);
  report(1, "exact linearity", failures == 0 && secs < 10.0,
         "200 random (seed,A,B) triples at u=2^16, failures=" +
             std::to_string(failures),
         secs);
}

void criterion_2_neighbor_sensitivity() {
  const auto start = clock_type::now();
  const WeightTable weights = WeightTable::uniform();
  std::mt19937_64 rng(202);
  std::vector<uint64_t> pool(1 << 16);
  std::iota(pool.begin(), pool.end(), 1);
  int failures = 0;
  for (int t = 0; t < 200; ++t) {
    const auto params = derive_params(1 << 16, 1.0, 0.25, ExplicitSizing{256},
                                      Seed::from_u64(rng()));
    auto ids = random_subset(pool, 100 + rng() % 1000, rng);
    const uint64_t z = ids.back();
    ids.pop_back();
    const KorSketch without = build(ids, weights, params);
    ids.push_back(z);
    const KorSketch with = build(ids, weights, params);
    BitMatrix diff = with.bits;
    diff.xor_with(without.bits);
    if (diff.popcount() > 1) ++failures;
  }
  report(2, "neighbor sensitivity", failures == 0,
         "200 (A,z) pairs, Hamming <= 1, failures=" + std::to_string(failures),
         seconds_since(start));
}

void criterion_3_exhaustive_privacy() {
  const auto start = clock_type::now();
  bool pass = true;
  std::string detail;
  for (double eps : {0.5, 1.0, 2.0}) {
    const double p = 1.0 / (2.0 + eps);
    const double ratio = verify_privacy_exhaustive(8, p);
    const bool ok = std::abs(ratio - (1.0 + eps)) <= 1e-12 &&
                    1.0 + eps <= std::exp(eps);
    pass = pass && ok;
    detail += "eps=" + std::to_string(eps).substr(0, 3) +
              " ratio-err=" + std::to_string(std::abs(ratio - (1.0 + eps))) +
              " ";
  }
  const double secs = seconds_since(start);
  report(3, "exhaustive privacy", pass && secs < 1.0, detail, secs);
}

void criterion_4_expectation_oracle() {
  const auto start = clock_type::now();
  std::mt19937_64 rng(404);
  const double p = 1.0 / 3.0;
  const double tol = 4.0 * std::sqrt(256.0 / (4.0 * 100000.0));
  int bad_levels = 0;
  for (int s = 0; s < 20; ++s) {
    const auto params = derive_params(1 << 12, 1.0, 0.25, ExplicitSizing{256},
                                      Seed::from_u64(rng()));
    WeightTable weights = WeightTable::strict();
    std::vector<uint64_t> ids;
    const uint64_t count = 16 + rng() % 497;
    std::unordered_set<uint64_t> seen;
    while (ids.size() < count) {
      const uint64_t id = 1 + rng() % params.universe_size;
      if (!seen.insert(id).second) continue;
      weights.insert(id, 0.001 + 0.999 * static_cast<double>(rng() % 1000) /
                             999.0);
      ids.push_back(id);
    }
    const ExactStats stats = exact_expected_ones(ids, weights, params, p);
    const McMoments mc =
        monte_carlo_Z(ids, weights, params, p, 100000, rng());
    for (uint16_t i = 0; i < params.num_levels; ++i) {
      if (std::abs(mc.mean[i] - stats.expected_z[i]) > tol) ++bad_levels;
    }
  }
  const double secs = seconds_since(start);
  report(4, "expectation oracle", bad_levels == 0 && secs < 120.0,
         "20 weighted sets x 12 levels, tol=" + std::to_string(tol) +
             ", out-of-tolerance levels=" + std::to_string(bad_levels),
         secs);
}

void criterion_5_noise_composition() {
  const auto start = clock_type::now();
  bool identity_ok = true;
  for (double eps : {0.5, 1.0, 2.0}) {
    const double pp = 2.0 * (1.0 / (2.0 + eps)) * (1.0 - 1.0 / (2.0 + eps));
    const double eps_prime = eps * eps / (2.0 + 2.0 * eps);
    identity_ok =
        identity_ok && std::abs(1.0 / (2.0 + eps_prime) - pp) <= 1e-12;
  }
  // Empirical 2p(1-p) over 2^20 bits.
  const auto params = derive_params(16, 1.0, 0.25, ExplicitSizing{262144},
                                    Seed::from_u64(505));
  std::mt19937_64 rng(505);
  const KorSketch clean = empty_sketch(params);
  const NoisySketch merged =
      merge(randomize(clean, params, rng), randomize(clean, params, rng));
  const double tau = static_cast<double>(params.sketch_bits());
  const double p = params.flip_prob;
  const double pp = 2.0 * p * (1.0 - p);
  const double sigma = std::sqrt(tau * pp * (1.0 - pp));
  const double dev =
      std::abs(static_cast<double>(merged.bits.popcount()) - pp * tau);
  report(5, "noise composition", identity_ok && dev < 4.0 * sigma,
         "identity<=1e-12 for eps={0.5,1,2}; empirical |dev|=" +
             std::to_string(dev) + " < 4sigma=" + std::to_string(4.0 * sigma),
         seconds_since(start));
}

struct TrialStats {
  int within_beta = 0;
  int zero = 0;
  int trials = 0;
};

TrialStats run_size(uint64_t set_size, const SketchParams& base,
                    std::vector<uint64_t>& pool, int trials, double beta,
                    std::mt19937_64& rng) {
  const WeightTable weights = WeightTable::uniform();
  TrialStats out;
  out.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const SketchParams params = with_seed(base, Seed::from_u64(rng()));
    const auto ids = random_subset(pool, set_size, rng);
    const KorSketch clean = build(ids, weights, params);
    const NoisySketch noisy = randomize(clean, params, rng);
    const EstimationResult est = estimate(noisy, params);
    if (est.estimate == 0.0) ++out.zero;
    if (set_size > 0) {
      const double rel = std::abs(est.estimate - static_cast<double>(set_size)) /
                         static_cast<double>(set_size);
      if (rel <= beta) ++out.within_beta;
    }
  }
  return out;
}

void criterion_6_end_to_end() {
  const auto start = clock_type::now();
  const uint64_t u = 1 << 20;
  const double eps = 2.0, beta = 0.25;
  const double c = calibrate_practical_c(u, eps, beta, 0.98, 100, 606);
  const uint64_t n = practical_n(u, eps, beta, c);
  if (64 * n > u) {
    report(6, "end-to-end accuracy", false,
           "calibrated n too large for the 64n probe (c=" + std::to_string(c) +
               ")",
           seconds_since(start));
    return;
  }
  const SketchParams base =
      derive_params(u, eps, beta, PracticalSizing{c}, Seed::from_u64(1));
  std::vector<uint64_t> pool(u);
  std::iota(pool.begin(), pool.end(), 1);
  std::mt19937_64 rng(606);

  const TrialStats big16 = run_size(16 * n, base, pool, 200, beta, rng);
  const TrialStats big64 = run_size(64 * n, base, pool, 200, beta, rng);
  const TrialStats quarter = run_size(n / 4, base, pool, 200, beta, rng);
  const TrialStats sixteenth = run_size(n / 16, base, pool, 200, beta, rng);
  const TrialStats empty = run_size(0, base, pool, 200, beta, rng);

  const bool pass = big16.within_beta >= 198 && big64.within_beta >= 198 &&
                    quarter.zero >= 198 && sixteenth.zero >= 198 &&
                    empty.zero >= 198;
  const double secs = seconds_since(start);
  report(6, "end-to-end accuracy", pass && secs < 600.0,
         "calibrated c=" + std::to_string(static_cast<int>(c)) +
             " n=" + std::to_string(n) +
             "; within-beta 16n=" + std::to_string(big16.within_beta) +
             "/200 64n=" + std::to_string(big64.within_beta) +
             "/200; zeros n/4=" + std::to_string(quarter.zero) +
             "/200 n/16=" + std::to_string(sixteenth.zero) +
             "/200 empty=" + std::to_string(empty.zero) + "/200",
         secs);
}

void criterion_7_symmetric_difference() {
  const auto start = clock_type::now();
  const uint64_t u = 1 << 20;
  const double eps = 2.0, beta = 0.25;
  const uint32_t n = 1 << 14;
  const SketchParams base =
      derive_params(u, eps, beta, ExplicitSizing{n}, Seed::from_u64(2));
  const WeightTable weights = WeightTable::uniform();
  std::vector<uint64_t> pool(u);
  std::iota(pool.begin(), pool.end(), 1);
  std::mt19937_64 rng(707);

  const uint64_t diff_half = 16ull * n;  // |A\B| = |B\A| = 16n
  const uint64_t shared = 8ull * n;
  int within = 0;
  for (int t = 0; t < 200; ++t) {
    const SketchParams params = with_seed(base, Seed::from_u64(rng()));
    const auto ids = random_subset(pool, shared + 2 * diff_half, rng);
    std::vector<uint64_t> a(ids.begin(), ids.begin() + shared + diff_half);
    std::vector<uint64_t> b(ids.begin(), ids.begin() + shared);
    b.insert(b.end(), ids.begin() + shared + diff_half, ids.end());
    const NoisySketch na = randomize(build(a, weights, params), params, rng);
    const NoisySketch nb = randomize(build(b, weights, params), params, rng);
    const EstimationResult est = estimate_symmetric_difference(na, nb, params);
    const double exact = static_cast<double>(2 * diff_half);
    if (std::abs(est.estimate - exact) <= beta * exact) ++within;
  }

  int zeros = 0;
  for (int t = 0; t < 200; ++t) {
    const SketchParams params = with_seed(base, Seed::from_u64(rng()));
    const auto a = random_subset(pool, 4ull * n, rng);
    const KorSketch clean = build(a, weights, params);
    const NoisySketch na = randomize(clean, params, rng);
    const NoisySketch nb = randomize(clean, params, rng);
    if (estimate_symmetric_difference(na, nb, params).estimate == 0.0) ++zeros;
  }

  report(7, "symmetric difference", within >= 190 && zeros >= 198,
         "|A sym B| = 32n at composed eps': within-beta " +
             std::to_string(within) + "/200 (need 190); A=B zeros " +
             std::to_string(zeros) + "/200 (need 198)",
         seconds_since(start));
}

void criterion_8_set_algebra() {
  const auto start = clock_type::now();
  const uint64_t u = 1 << 20;
  const double eps = 2.0, beta = 0.25;
  const uint32_t n = 1 << 14;
  const SketchParams base =
      derive_params(u, eps, beta, ExplicitSizing{n}, Seed::from_u64(3));
  const WeightTable weights = WeightTable::uniform();
  std::vector<uint64_t> pool(u);
  std::iota(pool.begin(), pool.end(), 1);
  std::mt19937_64 rng(808);

  bool identity_ok = true;
  double sum_union_err = 0.0, sum_sym_err = 0.0;
  const int trials = 100;
  const uint64_t diff_half = 8ull * n, shared = 16ull * n;
  for (int t = 0; t < trials; ++t) {
    const SketchParams params = with_seed(base, Seed::from_u64(rng()));
    const auto ids = random_subset(pool, shared + 2 * diff_half, rng);
    std::vector<uint64_t> a(ids.begin(), ids.begin() + shared + diff_half);
    std::vector<uint64_t> b(ids.begin(), ids.begin() + shared);
    b.insert(b.end(), ids.begin() + shared + diff_half, ids.end());

    const double exact_wa = static_cast<double>(a.size());
    const double exact_wb = static_cast<double>(b.size());
    const double exact_sym = static_cast<double>(2 * diff_half);
    const double exact_union = static_cast<double>(shared + 2 * diff_half);

    const PrivateWeight wa =
        laplace_weight(exact_wa, eps, weights.max_weight(), rng);
    const PrivateWeight wb =
        laplace_weight(exact_wb, eps, weights.max_weight(), rng);
    const NoisySketch na = randomize(build(a, weights, params), params, rng);
    const NoisySketch nb = randomize(build(b, weights, params), params, rng);
    const EstimationResult sym = estimate_symmetric_difference(na, nb, params);
    const SetAlgebraEstimates algebra = set_algebra(wa, wb, sym);

    if (!algebra.clamped &&
        algebra.union_weight + algebra.intersection != wa.value + wb.value) {
      identity_ok = false;
    }
    sum_union_err += std::abs(algebra.union_weight - exact_union);
    sum_sym_err += std::abs(sym.estimate - exact_sym);
  }
  const double mean_union_err = sum_union_err / trials;
  const double mean_sym_err = sum_sym_err / trials;
  const double laplace_mad = weights.max_weight() / eps;
  const double budget = 1.2 * (0.5 * mean_sym_err + 2.0 * laplace_mad);
  report(8, "set algebra", identity_ok && mean_union_err <= budget,
         "identity exact; mean union err " + std::to_string(mean_union_err) +
             " <= budget " + std::to_string(budget) + " (half sym err " +
             std::to_string(0.5 * mean_sym_err) + " + 2 MAD, 20% slack)",
         seconds_since(start));
}

void criterion_9_streaming_union() {
  const auto start = clock_type::now();
  bool parity_ok = true;
  for (uint32_t c = 1; c <= 10; ++c) {
    double odd = 0.0;
    for (uint32_t k = 1; k <= c; k += 2) {
      double binom = 1.0;
      for (uint32_t i = 0; i < k; ++i)
        binom *= static_cast<double>(c - i) / static_cast<double>(i + 1);
      odd += binom;
    }
    if (std::abs(odd / std::pow(2.0, c) - 0.5) > 1e-12) parity_ok = false;
  }

  const uint64_t u = 1 << 20;
  const double eps = 2.0, beta = 0.25;
  const uint32_t n = 1 << 14;
  const SketchParams base =
      derive_params(u, eps, beta, ExplicitSizing{n}, Seed::from_u64(4));
  const WeightTable weights = WeightTable::uniform();
  std::mt19937_64 rng(909);

  // Union covers 64n ids; both parties see 60% of them, 20% overlap, each
  // occurrence repeated 1..8 times.
  const uint64_t union_size = 64ull * n;
  const double exact_union = static_cast<double>(union_size);
  auto make_stream = [&](uint64_t from, uint64_t to) {
    std::vector<uint64_t> stream;
    stream.reserve((to - from + 1) * 5);
    for (uint64_t id = from; id <= to; ++id) {
      const uint32_t copies = 1 + rng() % 8;
      for (uint32_t k = 0; k < copies; ++k) stream.push_back(id);
    }
    std::shuffle(stream.begin(), stream.end(), rng);
    return stream;
  };

  int within = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const SketchParams params = with_seed(base, Seed::from_u64(rng()));
    const auto stream_a = make_stream(1, union_size * 6 / 10);
    const auto stream_b = make_stream(union_size * 4 / 10 + 1, union_size);
    PreSampledSketch sa(params), sb(params);
    for (uint64_t id : stream_a) sa.insert(id, weights, rng);
    for (uint64_t id : stream_b) sb.insert(id, weights, rng);
    const EstimationResult est =
        union_estimate(randomize_at(sa.inner(), eps, rng),
                       randomize_at(sb.inner(), eps, rng), params);
    if (std::abs(est.estimate - exact_union) <= beta * exact_union) ++within;
  }
  report(9, "streaming union", parity_ok && within >= 190,
         "parity exact for c<=10; duplicate-heavy union within beta " +
             std::to_string(within) + "/200 (need 190)",
         seconds_since(start));
}

void criterion_10_performance() {
  const auto start = clock_type::now();
  // tau = 2^18 exactly: u = 2^32 levels 32, n = 8192.
  const uint64_t u = uint64_t{1} << 32;
  const SketchParams params =
      derive_params(u, 2.0, 0.25, ExplicitSizing{8192}, Seed::from_u64(5));
  const WeightTable weights = WeightTable::uniform();
  std::mt19937_64 rng(1010);

  auto sample_ids = [&](uint64_t count) {
    std::unordered_set<uint64_t> seen;
    std::vector<uint64_t> ids;
    ids.reserve(count);
    while (ids.size() < count) {
      const uint64_t id = 1 + rng() % u;
      if (seen.insert(id).second) ids.push_back(id);
    }
    return ids;
  };

  const auto ids_1m = sample_ids(1000000);
  const auto t0 = clock_type::now();
  const KorSketch big = build(ids_1m, weights, params);
  const double build_s = seconds_since(t0);

  std::mt19937_64 noise_rng(1);
  const NoisySketch noisy = randomize(big, params, noise_rng);
  double estimate_s = 1e9;
  for (int rep = 0; rep < 5; ++rep) {
    const auto e0 = clock_type::now();
    const EstimationResult est = estimate(noisy, params);
    estimate_s = std::min(estimate_s, seconds_since(e0));
    (void)est;
  }

  // Scaling shape: build time vs set size at fixed tau, best of five runs
  // per size to shed scheduler noise.
  std::vector<double> sizes, times;
  for (uint64_t m : {200000ull, 400000ull, 600000ull, 800000ull, 1000000ull}) {
    const auto ids = sample_ids(m);
    double best = 1e9;
    for (int rep = 0; rep < 5; ++rep) {
      const auto b0 = clock_type::now();
      const KorSketch s = build(ids, weights, params);
      best = std::min(best, seconds_since(b0));
      (void)s;
    }
    sizes.push_back(static_cast<double>(m));
    times.push_back(best);
  }
  const Fit build_fit = linear_fit(sizes, times);

  // Estimate time vs tau.
  std::vector<double> taus, est_times;
  for (uint32_t nn : {4096u, 8192u, 16384u, 32768u, 65536u}) {
    const SketchParams p2 = derive_params(1 << 20, 2.0, 0.25,
                                          ExplicitSizing{nn}, Seed::from_u64(6));
    const NoisySketch s2 =
        randomize(empty_sketch(p2), p2, noise_rng);
    double best = 1e9;
    for (int rep = 0; rep < 20; ++rep) {
      const auto e0 = clock_type::now();
      const EstimationResult est = estimate(s2, p2);
      best = std::min(best, seconds_since(e0));
      (void)est;
    }
    taus.push_back(static_cast<double>(p2.sketch_bits()));
    est_times.push_back(best);
  }
  const Fit est_fit = linear_fit(taus, est_times);

  const bool pass = build_s < 2.0 && estimate_s < 0.05 &&
                    build_fit.r2 >= 0.98 && est_fit.r2 >= 0.98;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "build 1e6@tau=2^18 %.3fs (<2s), estimate %.4fs (<50ms), "
                "build R2=%.4f, estimate R2=%.4f (>=0.98)",
                build_s, estimate_s, build_fit.r2, est_fit.r2);
  report(10, "performance contract", pass, buf, seconds_since(start));
}

}  // namespace

int main() {
  std::printf("acceptance gates\n");
  criterion_1_linearity();
  criterion_2_neighbor_sensitivity();
  criterion_3_exhaustive_privacy();
  criterion_4_expectation_oracle();
  criterion_5_noise_composition();
  criterion_6_end_to_end();
  criterion_7_symmetric_difference();
  criterion_8_set_algebra();
  criterion_9_streaming_union();
  criterion_10_performance();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
