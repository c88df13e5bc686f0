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

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <thread>
#include <unordered_set>

#include <CLI11.hpp>
#include <json.hpp>

#include "kor/errors.hpp"
#include "kor/estimator.hpp"
#include "kor/oracle.hpp"
#include "kor/params.hpp"
#include "kor/privacy.hpp"
#include "kor/serialize.hpp"
#include "kor/sketch.hpp"
#include "kor/streaming.hpp"
#include "kor/textio.hpp"

namespace {

using nlohmann::json;

struct ParamsArgs {
  uint64_t universe = 0;
  double epsilon = 0.0;
  double beta = 0.0;
  std::string seed_hex;
  // sizing: exactly one of these
  uint32_t explicit_n = 0;
  double practical_c = 0.0;
  bool strict = false;
};

void add_params_flags(CLI::App* cmd, ParamsArgs& args,
                      bool require_seed = true) {
  cmd->add_option("--universe", args.universe, "Universe size u (ids 1..u)")
      ->required();
  cmd->add_option("--epsilon", args.epsilon, "Per-party privacy budget")
      ->required();
  cmd->add_option("--beta", args.beta, "Target relative error in (0,1)")
      ->required();
  auto* seed =
      cmd->add_option("--seed", args.seed_hex, "Shared 128-bit seed, hex");
  if (require_seed) seed->required();
  auto* n = cmd->add_option("--n", args.explicit_n, "Explicit buckets per level");
  auto* c = cmd->add_option("--c", args.practical_c,
                            "Practical sizing constant (default 8)");
  auto* s = cmd->add_flag("--strict", args.strict,
                          "Worst-case sizing from the failure-probability bound");
  n->excludes(c)->excludes(s);
  c->excludes(s);
}

kor::SketchParams params_from_args(const ParamsArgs& args) {
  kor::SizingPolicy sizing = kor::PracticalSizing{8.0};
  if (args.explicit_n > 0) {
    sizing = kor::ExplicitSizing{args.explicit_n};
  } else if (args.practical_c > 0.0) {
    sizing = kor::PracticalSizing{args.practical_c};
  } else if (args.strict) {
    sizing = kor::StrictSizing{};
  }
  return kor::derive_params(args.universe, args.epsilon, args.beta, sizing,
                            kor::Seed::from_hex(args.seed_hex));
}

json params_to_json(const ParamsArgs& args, const kor::SketchParams& p) {
  json sizing;
  if (args.explicit_n > 0) {
    sizing = {{"policy", "explicit"}, {"n", args.explicit_n}};
  } else if (args.strict) {
    sizing = {{"policy", "strict"}};
  } else {
    sizing = {{"policy", "practical"},
              {"c", args.practical_c > 0.0 ? args.practical_c : 8.0}};
  }
  return json{{"universe", p.universe_size}, {"epsilon", p.epsilon},
              {"beta", p.beta},              {"seed", p.seed.to_hex()},
              {"sizing", sizing},            {"derived",
               {{"levels", p.num_levels},
                {"n", p.buckets_per_level},
                {"tau", p.sketch_bits()},
                {"p", p.flip_prob},
                {"gamma", p.gamma},
                {"eta", p.eta}}}};
}

kor::SketchParams load_params_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw kor::IoError("cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw kor::IoError(path + ": " + e.what());
  }
  ParamsArgs args;
  try {
    args.universe = j.at("universe").get<uint64_t>();
    args.epsilon = j.at("epsilon").get<double>();
    args.beta = j.at("beta").get<double>();
    args.seed_hex = j.at("seed").get<std::string>();
    const json& sizing = j.at("sizing");
    const std::string policy = sizing.at("policy").get<std::string>();
    if (policy == "explicit") {
      args.explicit_n = sizing.at("n").get<uint32_t>();
    } else if (policy == "practical") {
      args.practical_c = sizing.at("c").get<double>();
    } else if (policy == "strict") {
      args.strict = true;
    } else {
      throw kor::IoError(path + ": unknown sizing policy " + policy);
    }
  } catch (const json::exception& e) {
    throw kor::IoError(path + ": " + e.what());
  }
  return params_from_args(args);
}

const char* status_name(kor::EstimateStatus s) {
  return s == kor::EstimateStatus::kConfident ? "confident"
                                              : "below_threshold_zero";
}

json estimate_record(const kor::EstimationResult& r) {
  return json{{"estimate", r.estimate},
              {"lo", r.interval.lo},
              {"hi", r.interval.hi},
              {"status", status_name(r.status)},
              {"epsilon_eff", r.epsilon_eff},
              {"p_eff", r.p_eff},
              {"gamma_used", r.gamma_used},
              {"eta_used", r.eta_used},
              {"disjoint_levels", r.disjoint_levels},
              {"z", r.level_counts.z}};
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<uint64_t> sample_distinct(uint64_t universe, uint64_t count,
                                      std::mt19937_64& rng) {
  if (count > universe) throw kor::InvalidParams("set larger than universe");
  std::vector<uint64_t> out;
  out.reserve(count);
  if (universe <= (1ull << 24)) {
    std::vector<uint64_t> pool(universe);
    std::iota(pool.begin(), pool.end(), 1);
    for (uint64_t i = 0; i < count; ++i) {
      const uint64_t j = i + rng() % (universe - i);
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
    return out;
  }
  std::unordered_set<uint64_t> seen;
  seen.reserve(count * 2);
  while (out.size() < count) {
    const uint64_t id = 1 + rng() % universe;
    if (seen.insert(id).second) out.push_back(id);
  }
  return out;
}

unsigned worker_count() {
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KOR_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) workers = std::min<unsigned>(workers, static_cast<unsigned>(cap));
  }
  return workers;
}

struct BenchRow {
  uint64_t m_target = 0;
  double exact = 0.0;
  double mean_est = 0.0;
  double mean_rel_err = 0.0;
  double p95_rel_err = 0.0;
  double zero_rate = 0.0;
  double wall_ms = 0.0;
};

BenchRow bench_one_size(uint64_t m, const ParamsArgs& base, uint32_t trials,
                        uint64_t rng_seed, size_t size_index) {
  struct Trial {
    double est = 0.0;
    double rel = 0.0;
    bool zero = false;
    double ms = 0.0;
  };
  std::vector<Trial> results(trials);
  std::atomic<uint32_t> next{0};
  const unsigned workers = std::min<unsigned>(worker_count(), trials);

  auto run_trial = [&](uint32_t t) {
    std::mt19937_64 rng(
        splitmix64(rng_seed ^ (size_index * 0x51ul << 32) ^ t));
    ParamsArgs args = base;
    args.seed_hex = kor::Seed::from_u64(rng()).to_hex();
    const kor::SketchParams params = params_from_args(args);
    const kor::WeightTable weights = kor::WeightTable::uniform();
    const auto ids = sample_distinct(params.universe_size, m, rng);

    const auto t0 = std::chrono::steady_clock::now();
    const kor::KorSketch clean = kor::build(ids, weights, params);
    const kor::NoisySketch noisy = kor::randomize(clean, params, rng);
    const kor::EstimationResult est = kor::estimate(noisy, params);
    const auto t1 = std::chrono::steady_clock::now();

    Trial out;
    out.est = est.estimate;
    out.rel = m > 0 ? std::abs(est.estimate - static_cast<double>(m)) /
                          static_cast<double>(m)
                    : est.estimate;
    out.zero = !est.confident();
    out.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    results[t] = out;
  };

  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (uint32_t t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
        run_trial(t);
      }
    });
  }
  for (auto& th : pool) th.join();

  BenchRow row;
  row.m_target = m;
  row.exact = static_cast<double>(m);
  std::vector<double> rels;
  rels.reserve(trials);
  for (const Trial& tr : results) {
    row.mean_est += tr.est;
    row.mean_rel_err += tr.rel;
    row.zero_rate += tr.zero ? 1.0 : 0.0;
    row.wall_ms += tr.ms;
    rels.push_back(tr.rel);
  }
  row.mean_est /= trials;
  row.mean_rel_err /= trials;
  row.zero_rate /= trials;
  row.wall_ms /= trials;
  std::sort(rels.begin(), rels.end());
  row.p95_rel_err = rels[static_cast<size_t>(0.95 * (rels.size() - 1))];
  return row;
}

int run_app(int argc, char** argv) {
  CLI::App app{"Differentially private GF(2) sketches for weighted distinct "
               "counting and set algebra"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  app.add_option("--format", format, "Output format: json or text")
      ->check(CLI::IsMember({"json", "text"}));
  uint64_t rng_seed = std::random_device{}();
  app.add_option("--rng-seed", rng_seed,
                 "Private RNG seed (noise, coins); runs are reproducible "
                 "given the same value");

  // --- params ---------------------------------------------------------
  ParamsArgs params_args;
  std::string params_out;
  auto* cmd_params = app.add_subcommand("params", "Derive family constants");
  add_params_flags(cmd_params, params_args);
  cmd_params->add_option("--out", params_out, "Write a params file");

  // --- build ----------------------------------------------------------
  std::string build_input, build_weights, build_params, build_out;
  auto* cmd_build = app.add_subcommand("build", "Sketch a set file");
  cmd_build->add_option("--input", build_input, "Set file, one id per line")
      ->required();
  cmd_build->add_option("--weights", build_weights, "TSV id<TAB>weight");
  cmd_build->add_option("--params", build_params, "Params file")->required();
  cmd_build->add_option("--out", build_out, "Output sketch file")->required();

  // --- randomize ------------------------------------------------------
  std::string rnd_in, rnd_out;
  double rnd_epsilon = 0.0;
  auto* cmd_rnd =
      app.add_subcommand("randomize", "Apply randomized response to a sketch");
  cmd_rnd->add_option("--in", rnd_in, "Clean sketch file")->required();
  cmd_rnd->add_option("--epsilon", rnd_epsilon, "Release budget")->required();
  cmd_rnd->add_option("--out", rnd_out, "Output noisy sketch")->required();

  // --- merge ----------------------------------------------------------
  std::string merge_a, merge_b, merge_out;
  auto* cmd_merge =
      app.add_subcommand("merge", "Combine two noisy sketches (XOR)");
  cmd_merge->add_option("--a", merge_a)->required();
  cmd_merge->add_option("--b", merge_b)->required();
  cmd_merge->add_option("--out", merge_out)->required();

  // --- estimate -------------------------------------------------------
  std::string est_in;
  auto* cmd_est =
      app.add_subcommand("estimate", "Estimate the weight behind a sketch");
  cmd_est->add_option("--in", est_in, "Noisy sketch file")->required();

  // --- setops ---------------------------------------------------------
  double so_wa = 0.0, so_wb = 0.0, so_sym = 0.0;
  auto* cmd_setops = app.add_subcommand(
      "setops", "Union/intersection/differences from released quantities");
  cmd_setops->add_option("--wa", so_wa, "Private weight of A")->required();
  cmd_setops->add_option("--wb", so_wb, "Private weight of B")->required();
  cmd_setops
      ->add_option("--symdiff-est", so_sym, "Symmetric-difference estimate")
      ->required();

  // --- bench ----------------------------------------------------------
  ParamsArgs bench_args;
  std::vector<uint64_t> bench_sizes;
  uint32_t bench_trials = 1;
  std::string bench_out;
  auto* cmd_bench =
      app.add_subcommand("bench", "Accuracy/latency sweep over set sizes");
  add_params_flags(cmd_bench, bench_args, /*require_seed=*/false);
  cmd_bench->add_option("--sizes", bench_sizes, "Set sizes to sweep")
      ->required()
      ->delimiter(',');
  cmd_bench->add_option("--trials", bench_trials, "Trials per size")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd_bench->add_option("--out", bench_out, "CSV output path")->required();

  // --- stream-sim -----------------------------------------------------
  std::string ss_a, ss_b, ss_weights, ss_params, ss_out;
  double ss_epsilon = 0.0;
  uint32_t ss_trials = 1;
  auto* cmd_ss = app.add_subcommand(
      "stream-sim", "Two-party distributed streaming union simulation");
  cmd_ss->add_option("--stream-a", ss_a, "Stream file (repeats allowed)")
      ->required();
  cmd_ss->add_option("--stream-b", ss_b)->required();
  cmd_ss->add_option("--weights", ss_weights, "TSV id<TAB>weight");
  cmd_ss->add_option("--params", ss_params, "Params file")->required();
  cmd_ss->add_option("--epsilon", ss_epsilon, "Per-party budget")->required();
  cmd_ss->add_option("--trials", ss_trials)->required()->check(
      CLI::PositiveNumber);
  cmd_ss->add_option("--out", ss_out, "CSV output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : 2;
  }

  if (cmd_params->parsed()) {
    // Worst-case sizing usually exceeds what a sketch file can hold (n is a
    // u32 on disk); still report the iterated n.
    if (params_args.strict) {
      const uint64_t n = kor::strict_n(params_args.universe,
                                       params_args.epsilon, params_args.beta);
      if (n > std::numeric_limits<uint32_t>::max()) {
        std::cout << json{{"strict_n", n},
                          {"universe", params_args.universe},
                          {"epsilon", params_args.epsilon},
                          {"beta", params_args.beta},
                          {"note", "n exceeds the 32-bit sketch format"}}
                         .dump()
                  << "\n";
        return 0;
      }
    }
    const kor::SketchParams p = params_from_args(params_args);
    const json j = params_to_json(params_args, p);
    if (!params_out.empty()) {
      std::ofstream f(params_out, std::ios::trunc);
      if (!f) throw kor::IoError("cannot open " + params_out);
      f << j.dump(2) << "\n";
    }
    if (format == "json") {
      std::cout << j.dump() << "\n";
    } else {
      std::cout << kor::describe(p) << "\n";
    }
    return 0;
  }

  if (cmd_build->parsed()) {
    const kor::SketchParams params = load_params_file(build_params);
    const kor::WeightTable weights = build_weights.empty()
                                         ? kor::WeightTable::uniform()
                                         : kor::read_weights_tsv(build_weights);
    const std::vector<uint64_t> ids = kor::read_id_file(build_input);
    const kor::KorSketch sketch = kor::build(ids, weights, params);
    kor::save_sketch_file(build_out, kor::serialize_sketch(sketch, params));
    std::cout << json{{"elements", ids.size()},
                      {"tau", params.sketch_bits()},
                      {"out", build_out}}
                     .dump()
              << "\n";
    return 0;
  }

  if (cmd_rnd->parsed()) {
    const kor::LoadedSketch loaded =
        kor::deserialize_sketch(kor::read_binary_file(rnd_in));
    if (loaded.is_noisy()) {
      throw kor::InvalidParams("input sketch is already noisy");
    }
    std::mt19937_64 rng(rng_seed);
    const kor::NoisySketch noisy = kor::randomize_at(
        std::get<kor::KorSketch>(loaded.sketch), rnd_epsilon, rng);
    kor::save_sketch_file(rnd_out,
                          kor::serialize_sketch(noisy, loaded.params));
    std::cout << json{{"epsilon", rnd_epsilon},
                      {"p", noisy.noise.p_eff},
                      {"out", rnd_out}}
                     .dump()
              << "\n";
    return 0;
  }

  if (cmd_merge->parsed()) {
    const kor::LoadedSketch a =
        kor::deserialize_sketch(kor::read_binary_file(merge_a));
    const kor::LoadedSketch b =
        kor::deserialize_sketch(kor::read_binary_file(merge_b));
    if (!a.is_noisy() || !b.is_noisy()) {
      throw kor::InvalidParams("merge expects two noisy sketches");
    }
    const kor::NoisySketch merged = kor::merge(
        std::get<kor::NoisySketch>(a.sketch), std::get<kor::NoisySketch>(b.sketch));
    kor::save_sketch_file(merge_out, kor::serialize_sketch(merged, a.params));
    std::cout << json{{"epsilon_eff", merged.noise.epsilon_eff},
                      {"merge_count", merged.noise.merge_count},
                      {"out", merge_out}}
                     .dump()
              << "\n";
    return 0;
  }

  if (cmd_est->parsed()) {
    const kor::LoadedSketch loaded =
        kor::deserialize_sketch(kor::read_binary_file(est_in));
    if (!loaded.is_noisy()) {
      throw kor::InvalidParams("estimate expects a noisy sketch");
    }
    const kor::EstimationResult r =
        kor::estimate(std::get<kor::NoisySketch>(loaded.sketch), loaded.params);
    if (format == "json") {
      std::cout << estimate_record(r).dump() << "\n";
    } else {
      std::cout << "estimate=" << r.estimate << " lo=" << r.interval.lo
                << " hi=" << r.interval.hi << " status=" << status_name(r.status)
                << " epsilon_eff=" << r.epsilon_eff << "\n";
    }
    return 0;
  }

  if (cmd_setops->parsed()) {
    kor::PrivateWeight wa{so_wa, 0.0, 1.0}, wb{so_wb, 0.0, 1.0};
    kor::EstimationResult sym;
    sym.estimate = so_sym;
    const kor::SetAlgebraEstimates s = kor::set_algebra(wa, wb, sym);
    std::cout << json{{"union", s.union_weight},
                      {"intersection", s.intersection},
                      {"a_minus_b", s.a_minus_b},
                      {"b_minus_a", s.b_minus_a},
                      {"clamped", s.clamped}}
                     .dump()
              << "\n";
    return 0;
  }

  if (cmd_bench->parsed()) {
    std::ofstream csv(bench_out, std::ios::trunc);
    if (!csv) throw kor::IoError("cannot open " + bench_out);
    csv << "m_target,exact,mean_est,mean_rel_err,p95_rel_err,zero_rate,"
           "wall_ms\n";
    csv.precision(12);
    for (size_t s = 0; s < bench_sizes.size(); ++s) {
      const BenchRow row =
          bench_one_size(bench_sizes[s], bench_args, bench_trials, rng_seed, s);
      csv << row.m_target << "," << row.exact << "," << row.mean_est << ","
          << row.mean_rel_err << "," << row.p95_rel_err << "," << row.zero_rate
          << "," << row.wall_ms << "\n";
      std::cout << json{{"m_target", row.m_target},
                        {"mean_rel_err", row.mean_rel_err},
                        {"p95_rel_err", row.p95_rel_err},
                        {"zero_rate", row.zero_rate},
                        {"wall_ms", row.wall_ms}}
                       .dump()
                << "\n";
    }
    return 0;
  }

  if (cmd_ss->parsed()) {
    const kor::SketchParams params = load_params_file(ss_params);
    const kor::WeightTable weights = ss_weights.empty()
                                         ? kor::WeightTable::uniform()
                                         : kor::read_weights_tsv(ss_weights);
    const std::vector<uint64_t> stream_a = kor::read_id_file(ss_a);
    const std::vector<uint64_t> stream_b = kor::read_id_file(ss_b);
    const kor::TwoPartyReport report = kor::simulate_two_party(
        stream_a, stream_b, weights, params, ss_epsilon, ss_trials, rng_seed);
    std::ofstream csv(ss_out, std::ios::trunc);
    if (!csv) throw kor::IoError("cannot open " + ss_out);
    csv << "trial,exact_union,estimate,rel_error,status\n";
    csv.precision(12);
    for (const auto& row : report.rows) {
      csv << row.trial << "," << row.exact_union << "," << row.estimate << ","
          << row.rel_error << "," << status_name(row.status) << "\n";
    }
    std::cout << json{{"trials", report.rows.size()},
                      {"mean_rel_error", report.mean_rel_error},
                      {"stddev_rel_error", report.stddev_rel_error},
                      {"build_ms", report.build_ms},
                      {"noise_ms", report.noise_ms},
                      {"estimate_ms", report.estimate_ms}}
                     .dump()
              << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const kor::ParamsMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const kor::CorruptHeader& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const kor::VersionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const kor::LengthMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const kor::InvalidParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
