/*
 * Copyright 2026 The svsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


// svsim: short-video prefetching simulator.
//
//   svsim gen-net --count N --seed S --out DIR [--prefix P --min-bw
//                 --max-bw --noise-std --state-dur --len]
//   svsim inspect FILE [--thresholds a,b] [--kind K]
//   svsim sample-retention --curve FILE --n 50 --repeats 100 --seed S
//                          --out FILE.csv
//   svsim run --algo NAME --net FILE --manifest FILE --seed S --out FILE
//   svsim score --trajectory FILE [--alpha --beta --gamma --theta]
//   svsim evaluate --config FILE --out DIR [--workers N] [--seed S]
//
// Exit codes: 0 success, 1 input error (JSON diagnostics on stderr),
// 2 usage error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "svsim/algorithm.h"
#include "svsim/errors.h"
#include "svsim/harness.h"
#include "svsim/network_trace.h"
#include "svsim/retention.h"
#include "svsim/runner.h"
#include "svsim/scoring.h"
#include "svsim/session.h"
#include "svsim/trajectory.h"
#include "svsim/video_trace.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace svsim {
namespace {

constexpr int kExitInputError = 1;
constexpr int kExitUsage = 2;

void WriteFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
}

ordered_json BreakdownJson(const QoeBreakdown& qoe, const WasteReport& waste,
                           const QoeCoefficients& k) {
  ordered_json j;
  j["coefficients"] = {{"alpha", k.alpha},
                       {"beta", k.beta},
                       {"gamma", k.gamma},
                       {"theta", k.theta}};
  j["score"] = qoe.score;
  j["quality_sum"] = qoe.quality_sum;
  j["smoothness_sum"] = qoe.smoothness_sum;
  j["rebuf_seconds"] = qoe.rebuf_seconds;
  j["bandwidth_megabits"] = qoe.bandwidth_megabits;
  j["waste_megabits"] = qoe.waste_megabits;
  ordered_json videos = ordered_json::array();
  for (const VideoQoe& v : qoe.videos) {
    videos.push_back({{"video_id", v.video_id},
                      {"played_chunks", v.played_chunks},
                      {"downloaded_chunks", v.downloaded_chunks},
                      {"quality_sum", v.quality_sum},
                      {"smoothness_sum", v.smoothness_sum},
                      {"rebuf_seconds", v.rebuf_seconds},
                      {"rebuf_penalty", v.rebuf_penalty},
                      {"bandwidth_megabits", v.bandwidth_megabits},
                      {"bandwidth_cost", v.bandwidth_cost},
                      {"utility", v.utility}});
  }
  j["videos"] = std::move(videos);
  ordered_json wasted = ordered_json::array();
  for (const WastedChunk& c : waste.chunks) {
    wasted.push_back({{"video_id", c.video_id},
                      {"chunk", c.chunk},
                      {"level", c.level},
                      {"bits", c.bits},
                      {"cause", WasteCauseName(c.cause)}});
  }
  j["waste"] = {{"wasted_bits", waste.wasted_bits},
                {"never_played_video_bits", waste.never_played_video_bits},
                {"past_swipe_point_bits", waste.past_swipe_point_bits},
                {"chunks", std::move(wasted)}};
  return j;
}

void AddCoefficientFlags(CLI::App* cmd, QoeCoefficients& k) {
  cmd->add_option("--alpha", k.alpha, "Quality weight")->capture_default_str();
  cmd->add_option("--beta", k.beta, "Rebuffering weight per second")
      ->capture_default_str();
  cmd->add_option("--gamma", k.gamma, "Smoothness weight")
      ->capture_default_str();
  cmd->add_option("--theta", k.theta, "Bandwidth weight per megabit")
      ->capture_default_str();
}

// --- gen-net ----------------------------------------------------------------

struct GenNetArgs {
  int count = 1;
  uint64_t seed = 0;
  std::string out;
  std::string prefix = "trace";
  SyntheticTraceParams params;
};

int GenNet(const GenNetArgs& args) {
  if (args.count < 1) {
    throw Error(ErrorCode::kInvalidParams, "--count must be >= 1");
  }
  std::error_code ec;
  fs::create_directories(args.out, ec);
  for (int i = 0; i < args.count; ++i) {
    SyntheticTraceParams p = args.params;
    p.seed = DeriveSeed(args.seed, static_cast<uint64_t>(i));
    char index[16];
    std::snprintf(index, sizeof(index), "_%04d", i);
    const std::string name = args.prefix + index;
    const NetworkTrace trace = GenerateSyntheticTrace(p, name);
    WriteFile(fs::path(args.out) / (name + ".txt"),
              SerializeNetworkTrace(trace));
  }
  std::cout << "wrote " << args.count << " synthetic traces to " << args.out
            << '\n';
  return 0;
}

// --- inspect ----------------------------------------------------------------

std::string DetectKind(const fs::path& path, const std::string& text) {
  if (path.extension() == ".json") return "manifest";
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::vector<std::string> row;
    std::string f;
    while (fields >> f) row.push_back(f);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) return "network";
  if (rows.front().size() == 1) return "video";
  const bool starts_like_retention =
      rows.front().size() == 2 && rows.front()[0] == "0" &&
      std::strtod(rows.front()[1].c_str(), nullptr) == 1.0;
  const bool ends_with_zero =
      rows.back().size() == 2 &&
      std::strtod(rows.back()[1].c_str(), nullptr) == 0.0;
  return starts_like_retention && ends_with_zero ? "retention" : "network";
}

int Inspect(const std::string& file, std::string kind,
            const std::string& thresholds_text) {
  const fs::path path(file);
  const std::string text = ReadFileOrThrow(path);
  if (kind == "auto") kind = DetectKind(path, text);
  ordered_json j;
  j["file"] = file;
  j["kind"] = kind;
  try {
    if (kind == "network") {
      const NetworkTrace trace = ParseNetworkTrace(text, path.stem().string());
      const CategoryThresholds thresholds = thresholds_text.empty()
                                                ? kPublicThresholds
                                                : ParseThresholds(thresholds_text);
      j["valid"] = true;
      j["points"] = trace.points().size();
      j["period_ms"] = trace.period_ms();
      j["mean_mbps"] = trace.MeanMbps();
      j["thresholds"] = {thresholds.low_cut_mbps, thresholds.high_cut_mbps};
      j["category"] = TraceCategoryName(Classify(trace, thresholds));
    } else if (kind == "retention") {
      const RetentionCurve curve = ParseRetentionTrace(text);
      j["valid"] = true;
      j["entries"] = curve.entries().size();
      j["end_second"] = curve.end_second();
      j["full_watch_fraction"] = curve.FractionAt(curve.end_second() - 1);
    } else if (kind == "video") {
      // A single size file: validate it as one ladder level.
      const RetentionCurve placeholder({{0, 1.0}, {1, 0.0}});
      std::vector<std::string_view> streams(kLevelCount, text);
      const VideoAsset video =
          ParseVideoTrace(streams, path.stem().string(), placeholder);
      int64_t total = 0;
      for (const auto& row : video.sizes_bytes) total += row[0];
      j["valid"] = true;
      j["chunks"] = video.chunk_count();
      j["mean_kbps"] = static_cast<double>(total) * 8.0 /
                       static_cast<double>(video.chunk_count()) / 1000.0;
    } else if (kind == "manifest") {
      const VideoSequence seq = LoadManifest(path);
      j["valid"] = true;
      j["sequence"] = seq.id;
      ordered_json videos = ordered_json::array();
      for (const auto& v : seq.videos) {
        videos.push_back({{"name", v->name},
                          {"chunks", v->chunk_count()},
                          {"duration_ms", v->duration_ms}});
      }
      j["videos"] = std::move(videos);
    } else {
      throw Error(ErrorCode::kInvalidParams,
                  "--kind must be auto, network, retention, video or manifest");
    }
  } catch (const Error& e) {
    j["valid"] = false;
    j["error"] = ErrorCodeName(e.code());
    j["message"] = e.what();
    if (e.line() > 0) j["line"] = e.line();
    std::cout << j.dump() << '\n';
    return kExitInputError;
  }
  std::cout << j.dump() << '\n';
  return 0;
}

// --- sample-retention -------------------------------------------------------

struct SampleRetentionArgs {
  std::string curve;
  int n = kDefaultUserSamples;
  int repeats = 100;
  uint64_t seed = 0;
  int64_t duration_ms = -1;
  std::string out;
};

int SampleRetention(const SampleRetentionArgs& args) {
  const RetentionCurve curve =
      ParseRetentionTrace(ReadFileOrThrow(args.curve));
  const int64_t duration = args.duration_ms >= 0
                               ? args.duration_ms
                               : std::max<int64_t>(0, curve.ImpliedDurationMs());
  Rng rng(args.seed);
  // The first repeat's empirical curve is exported alongside the stats.
  std::vector<int64_t> samples(static_cast<size_t>(std::max(args.n, 1)));
  Rng example_rng(args.seed);
  for (int64_t& d : samples) d = SampleWatchDuration(curve, duration, example_rng);
  const RetentionCurve example = EmpiricalRetention(samples, duration);
  const DeviationStats stats =
      SamplingDeviation(curve, duration, args.n, args.repeats, rng);

  std::string csv = "second,true_fraction,empirical_fraction\n";
  const int last = std::max(curve.end_second(), example.end_second());
  for (int s = 0; s <= last; ++s) {
    csv += std::to_string(s) + ',' + std::to_string(curve.FractionAt(s)) +
           ',' + std::to_string(example.FractionAt(s)) + '\n';
  }
  WriteFile(args.out, csv);
  ordered_json summary;
  summary["n"] = args.n;
  summary["repeats"] = args.repeats;
  summary["median_max_deviation"] = stats.median;
  summary["p90_max_deviation"] = stats.p90;
  std::cout << summary.dump() << '\n';
  return 0;
}

// --- run ----------------------------------------------------------------------

struct RunArgs {
  std::string algo;
  std::string net;
  std::string manifest;
  uint64_t seed = 0;
  std::string out;
  std::string params_file;
  std::vector<std::string> params;
  int64_t max_steps = kDefaultMaxSteps;
  QoeCoefficients coefficients;
};

AlgorithmParams CollectParams(const std::string& file,
                              const std::vector<std::string>& pairs) {
  AlgorithmParams params;
  if (!file.empty()) params = LoadParamsFile(file);
  for (const std::string& kv : pairs) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::kConfigError,
                  "--param expects key=value, got '" + kv + "'");
    }
    params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return params;
}

int Run(const RunArgs& args) {
  const fs::path net_path(args.net);
  auto network = std::make_shared<const NetworkTrace>(
      ParseNetworkTrace(ReadFileOrThrow(net_path), net_path.stem().string()));
  const VideoSequence sequence = LoadManifest(args.manifest);
  std::unique_ptr<Algorithm> algorithm = AlgorithmRegistry::Global().Create(
      args.algo, CollectParams(args.params_file, args.params));

  Session session(sequence.videos, network,
                  SampleWatchDurations(sequence, args.seed));
  AlgorithmContext context;
  context.window_size = session.window_size();
  context.ladder_kbps = sequence.videos.front()->ladder_kbps;
  context.seed = args.seed;
  algorithm->Initialize(context);

  RunOptions options;
  options.max_steps = args.max_steps;
  options.coefficients = args.coefficients;
  const RunResult result = RunSession(session, *algorithm, options);

  std::ostringstream jsonl;
  WriteTrajectoryJsonl(result.trajectory, jsonl);
  WriteFile(args.out, jsonl.str());
  std::cout << "algo=" << algorithm->name()
            << " steps=" << result.trajectory.steps.size()
            << " score=" << result.qoe.score
            << " quality=" << result.qoe.quality_sum
            << " rebuf_s=" << result.qoe.rebuf_seconds
            << " bandwidth_mb=" << result.qoe.bandwidth_megabits
            << " waste_mb=" << result.waste.waste_megabits << '\n';
  return 0;
}

// --- score --------------------------------------------------------------------

int Score(const std::string& trajectory_file, const QoeCoefficients& k,
          const std::string& out) {
  std::ifstream in(trajectory_file);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + trajectory_file);
  }
  const Trajectory trajectory = ReadTrajectoryJsonl(in);
  const QoeBreakdown qoe = ScoreSession(trajectory, k);
  const WasteReport waste = ComputeWaste(trajectory);
  const std::string text = BreakdownJson(qoe, waste, k).dump(2) + '\n';
  if (out.empty()) {
    std::cout << text;
  } else {
    WriteFile(out, text);
    std::cout << "score=" << qoe.score << " waste_mb=" << waste.waste_megabits
              << '\n';
  }
  return 0;
}

// --- evaluate -----------------------------------------------------------------

int EvaluateCommand(const std::string& config, const std::string& out,
                    std::optional<int> workers, std::optional<uint64_t> seed) {
  EvaluationPlan plan = LoadEvaluationConfig(config);
  if (seed) plan.seed = *seed;
  if (workers) {
    plan.workers = *workers;
  } else if (const char* env = std::getenv("SVSIM_WORKERS")) {
    plan.workers = std::max(1, std::atoi(env));
  }
  const auto started = std::chrono::steady_clock::now();
  const EvaluationOutcome outcome = RunEvaluation(plan);
  WriteEvaluationOutputs(outcome, plan, out);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  std::cout << "evaluated " << outcome.conditions.size() << " conditions x "
            << outcome.raw.algorithms.size()
            << " algorithms; best=" << outcome.ranking.entries.front().algorithm
            << " total=" << outcome.ranking.entries.front().total << '\n';
  std::cerr << "evaluation took " << seconds << " s on " << plan.workers
            << " worker(s)\n";
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Short-video multi-video prefetching simulator"};
  app.require_subcommand(1);

  GenNetArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-net", "Generate synthetic network traces");
  gen_cmd->add_option("--count", gen.count, "Number of traces")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--prefix", gen.prefix, "File name prefix")
      ->capture_default_str();
  gen_cmd->add_option("--min-bw", gen.params.min_bw_mbps, "Mbps")
      ->capture_default_str();
  gen_cmd->add_option("--max-bw", gen.params.max_bw_mbps, "Mbps")
      ->capture_default_str();
  gen_cmd->add_option("--noise-std", gen.params.noise_std_mbps, "Mbps")
      ->capture_default_str();
  gen_cmd->add_option("--state-dur", gen.params.mean_state_duration_s,
                      "Mean state duration, seconds")
      ->capture_default_str();
  gen_cmd->add_option("--len", gen.params.length_s, "Trace length, seconds")
      ->capture_default_str();

  std::string inspect_file;
  std::string inspect_kind = "auto";
  std::string inspect_thresholds;
  auto* inspect_cmd = app.add_subcommand("inspect", "Validate and describe a trace file");
  inspect_cmd->add_option("file", inspect_file, "Trace or manifest")->required();
  inspect_cmd->add_option("--kind", inspect_kind,
                          "auto|network|retention|video|manifest")
      ->capture_default_str();
  inspect_cmd->add_option("--thresholds", inspect_thresholds,
                          "Category cuts 'low,high' in Mbps (default 1.5,3)");

  SampleRetentionArgs sr;
  auto* sr_cmd = app.add_subcommand(
      "sample-retention", "Compare sampled and true retention curves");
  sr_cmd->add_option("--curve", sr.curve, "Retention file")->required();
  sr_cmd->add_option("--n", sr.n, "Viewers per repeat")->capture_default_str();
  sr_cmd->add_option("--repeats", sr.repeats, "Repeats")->capture_default_str();
  sr_cmd->add_option("--seed", sr.seed, "Seed")->capture_default_str();
  sr_cmd->add_option("--duration-ms", sr.duration_ms,
                     "Video length (default: implied by the curve)");
  sr_cmd->add_option("--out", sr.out, "CSV output path")->required();

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Simulate one session");
  run_cmd->add_option("--algo", run.algo, "Registered algorithm")->required();
  run_cmd->add_option("--net", run.net, "Network trace")->required();
  run_cmd->add_option("--manifest", run.manifest, "Video manifest")->required();
  run_cmd->add_option("--seed", run.seed, "Viewer seed")->capture_default_str();
  run_cmd->add_option("--out", run.out, "Trajectory JSONL path")->required();
  run_cmd->add_option("--params", run.params_file, "key = value file");
  run_cmd->add_option("--param", run.params, "key=value (repeatable)");
  run_cmd->add_option("--max-steps", run.max_steps, "Step ceiling")
      ->capture_default_str();
  AddCoefficientFlags(run_cmd, run.coefficients);

  std::string score_file;
  std::string score_out;
  QoeCoefficients score_k;
  auto* score_cmd = app.add_subcommand("score", "Score a trajectory");
  score_cmd->add_option("--trajectory", score_file, "Trajectory JSONL")
      ->required();
  score_cmd->add_option("--out", score_out, "Write JSON here instead of stdout");
  AddCoefficientFlags(score_cmd, score_k);

  std::string eval_config;
  std::string eval_out;
  std::optional<int> eval_workers;
  std::optional<uint64_t> eval_seed;
  auto* eval_cmd = app.add_subcommand("evaluate", "Run the evaluation grid");
  eval_cmd->add_option("--config", eval_config, "Evaluation config")->required();
  eval_cmd->add_option("--out", eval_out, "Output directory")->required();
  eval_cmd->add_option("--workers", eval_workers,
                       "Worker threads (default $SVSIM_WORKERS or config)");
  eval_cmd->add_option("--seed", eval_seed, "Override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);
    }
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return GenNet(gen);
    if (*inspect_cmd) return Inspect(inspect_file, inspect_kind, inspect_thresholds);
    if (*sr_cmd) return SampleRetention(sr);
    if (*run_cmd) return Run(run);
    if (*score_cmd) return Score(score_file, score_k, score_out);
    if (*eval_cmd) return EvaluateCommand(eval_config, eval_out, eval_workers, eval_seed);
  } catch (const Error& e) {
    ordered_json j;
    j["error"] = ErrorCodeName(e.code());
    j["message"] = e.what();
    if (e.line() > 0) j["line"] = e.line();
    std::cerr << j.dump() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    ordered_json j;
    j["error"] = "internal";
    j["message"] = e.what();
    std::cerr << j.dump() << '\n';
    return kExitInputError;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace svsim

int main(int argc, char** argv) { return svsim::Main(argc, argv); }
