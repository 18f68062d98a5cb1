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


#ifndef SVSIM_HARNESS_H_
#define SVSIM_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "svsim/algorithm.h"
#include "svsim/network_trace.h"
#include "svsim/retention.h"
#include "svsim/runner.h"
#include "svsim/scoring.h"
#include "svsim/video_trace.h"

namespace svsim {

inline constexpr int kDefaultUserSamples = 50;

// One (network, sequence, sampled viewer) scenario.
struct Condition {
  int index = 0;
  int network_index = 0;
  int sequence_index = 0;
  int user_sample = 0;
  std::string network_id;
  std::string sequence_id;
  uint64_t seed = 0;
};

// Stable mix of (master seed, trace id, sequence id, sample index); does not
// depend on grid order.
uint64_t ConditionSeed(uint64_t master_seed, const std::string& network_id,
                       const std::string& sequence_id, int user_sample);

// Independent child seed for item `index` of a seeded batch.
uint64_t DeriveSeed(uint64_t master_seed, uint64_t index);

// Full cartesian product, ordered network-major then sequence then sample.
std::vector<Condition> BuildGrid(
    const std::vector<std::shared_ptr<const NetworkTrace>>& networks,
    const std::vector<VideoSequence>& sequences, int user_samples,
    uint64_t master_seed);

// Watch times of the viewer behind `seed`, one per video in order.
std::vector<int64_t> SampleWatchDurations(const VideoSequence& sequence,
                                          uint64_t seed);

struct AlgorithmSpec {
  std::string name;  // column label
  std::string type;  // registry key
  AlgorithmParams params;
};

enum class NormalizationMode {
  // (S - MAX) / (MAX - MIN): best -> 0, baseline -> -1.
  kAnchored,
  // (S - MIN) / (MAX - MIN): best -> 1, baseline -> 0.
  kMinMax,
};

struct EvaluationPlan {
  std::vector<std::shared_ptr<const NetworkTrace>> networks;
  std::vector<VideoSequence> sequences;
  std::vector<AlgorithmSpec> algorithms;
  std::string baseline;  // name of the column used as MIN
  int user_samples = kDefaultUserSamples;
  uint64_t seed = 0;
  int workers = 1;
  RunOptions run_options;
  CategoryThresholds thresholds = kEvaluationThresholds;
  NormalizationMode normalization = NormalizationMode::kAnchored;
};

struct RawScores {
  std::vector<std::string> algorithms;
  std::vector<Condition> conditions;
  // scores[condition][algorithm]; failed runs hold the baseline score.
  std::vector<std::vector<double>> scores;
  std::vector<std::vector<bool>> failed;
  std::vector<std::vector<std::string>> errors;
};

// Runs every (algorithm, condition) pair on `workers` threads. All
// algorithms see the same watch times and trace for a given condition.
RawScores Evaluate(const EvaluationPlan& plan,
                   const std::vector<Condition>& conditions);

struct ConditionResult {
  double max = 0.0;
  double min = 0.0;  // baseline score
  bool degenerate = false;  // MAX == MIN; every entry is 0
  std::vector<double> normalized;
};

std::vector<ConditionResult> Normalize(const RawScores& raw,
                                       const std::string& baseline,
                                       NormalizationMode mode =
                                           NormalizationMode::kAnchored);

struct RankEntry {
  std::string algorithm;
  double total = 0.0;
  int rank = 0;  // 1-based
  std::vector<double> category_totals;  // Low, Medium, High
};

struct RankingReport {
  std::vector<RankEntry> entries;  // best first
};

// Sorts by descending sum of normalized scores; ties go to the
// lexicographically smaller name. `categories[i]` is the category of
// condition i.
RankingReport Rank(const std::vector<std::string>& algorithms,
                   const std::vector<ConditionResult>& results,
                   const std::vector<TraceCategory>& categories);

std::vector<TraceCategory> ConditionCategories(
    const EvaluationPlan& plan, const std::vector<Condition>& conditions);

struct EvaluationOutcome {
  std::vector<Condition> conditions;
  RawScores raw;
  std::vector<ConditionResult> normalized;
  std::vector<TraceCategory> categories;
  RankingReport ranking;
};

EvaluationOutcome RunEvaluation(const EvaluationPlan& plan);

// Writes raw_scores.csv, normalized.csv, ranking.json and per_category.csv.
void WriteEvaluationOutputs(const EvaluationOutcome& outcome,
                            const EvaluationPlan& plan,
                            const std::filesystem::path& out_dir);

// INI-style configuration:
//
//   [evaluation]
//   seed = 42
//   user_samples = 50
//   baseline = no_prefetch
//   workers = 4
//   thresholds = 1.9,3
//   normalization = anchored
//   max_steps = 1000000
//   [inputs]
//   network_dirs = traces/net
//   network_files = a.txt,b.txt
//   manifests = videos/manifest.json
//   [qoe]
//   alpha = 1
//   beta = 1.85
//   gamma = 1
//   theta = 0.5
//   [algorithm.threshold]
//   type = threshold
//   low_buffer_ms = 1000
//
// Lists are comma-separated; every *.txt in a network dir is a trace. Each
// [algorithm.NAME] section adds a column NAME whose registry key is `type`
// (default NAME); other keys become algorithm parameters. Comments go on
// their own line. Relative paths resolve against the config file's
// directory. `normalization` is `anchored` or `minmax`.
EvaluationPlan LoadEvaluationConfig(const std::filesystem::path& path);

// Flat "key = value" file, '#' or ';' comments.
AlgorithmParams LoadParamsFile(const std::filesystem::path& path);

// Loads every *.txt under `dir` as a network trace, sorted by file name.
std::vector<std::shared_ptr<const NetworkTrace>> LoadNetworkDir(
    const std::filesystem::path& dir);

}  // namespace svsim

#endif  // SVSIM_HARNESS_H_
