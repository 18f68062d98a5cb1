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


#include "svsim/harness.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <thread>
#include <utility>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "json.hpp"
#include "svsim/errors.h"
#include "svsim/session.h"
#include "text_util.h"

namespace svsim {

namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t Fnv1a64(const std::string& text) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

int ColumnOf(const std::vector<std::string>& algorithms,
             const std::string& name) {
  auto it = std::find(algorithms.begin(), algorithms.end(), name);
  if (it == algorithms.end()) {
    throw Error(ErrorCode::kMissingBaseline,
                "baseline '" + name + "' is not among the evaluated algorithms");
  }
  return static_cast<int>(it - algorithms.begin());
}

}  // namespace

uint64_t ConditionSeed(uint64_t master_seed, const std::string& network_id,
                       const std::string& sequence_id, int user_sample) {
  uint64_t h = SplitMix64(master_seed);
  h = SplitMix64(h ^ Fnv1a64(network_id));
  h = SplitMix64(h ^ Fnv1a64(sequence_id));
  return SplitMix64(h ^ static_cast<uint64_t>(user_sample));
}

uint64_t DeriveSeed(uint64_t master_seed, uint64_t index) {
  return SplitMix64(SplitMix64(master_seed) ^ SplitMix64(index));
}

std::vector<Condition> BuildGrid(
    const std::vector<std::shared_ptr<const NetworkTrace>>& networks,
    const std::vector<VideoSequence>& sequences, int user_samples,
    uint64_t master_seed) {
  if (networks.empty() || sequences.empty()) {
    throw Error(ErrorCode::kEmptyInput,
                "evaluation grid needs at least one network and one sequence");
  }
  if (user_samples < 1) {
    throw Error(ErrorCode::kEmptyInput, "need at least one user sample");
  }
  std::vector<Condition> grid;
  grid.reserve(networks.size() * sequences.size() *
               static_cast<size_t>(user_samples));
  for (size_t n = 0; n < networks.size(); ++n) {
    for (size_t s = 0; s < sequences.size(); ++s) {
      for (int u = 0; u < user_samples; ++u) {
        Condition c;
        c.index = static_cast<int>(grid.size());
        c.network_index = static_cast<int>(n);
        c.sequence_index = static_cast<int>(s);
        c.user_sample = u;
        c.network_id = networks[n]->id();
        c.sequence_id = sequences[s].id;
        c.seed = ConditionSeed(master_seed, c.network_id, c.sequence_id, u);
        grid.push_back(std::move(c));
      }
    }
  }
  return grid;
}

std::vector<int64_t> SampleWatchDurations(const VideoSequence& sequence,
                                          uint64_t seed) {
  Rng rng(seed);
  std::vector<int64_t> durations;
  durations.reserve(sequence.videos.size());
  for (const auto& video : sequence.videos) {
    durations.push_back(
        video->retention
            ? SampleWatchDuration(*video->retention, video->duration_ms, rng)
            : video->duration_ms);
  }
  return durations;
}

RawScores Evaluate(const EvaluationPlan& plan,
                   const std::vector<Condition>& conditions) {
  if (plan.algorithms.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no algorithms to evaluate");
  }
  RawScores raw;
  for (const AlgorithmSpec& spec : plan.algorithms) {
    if (!AlgorithmRegistry::Global().Contains(spec.type)) {
      throw Error(ErrorCode::kUnknownAlgorithm,
                  "no algorithm registered as '" + spec.type + "'");
    }
    raw.algorithms.push_back(spec.name);
  }
  const int baseline = ColumnOf(raw.algorithms, plan.baseline);
  raw.conditions = conditions;
  const size_t n_alg = plan.algorithms.size();
  raw.scores.assign(conditions.size(), std::vector<double>(n_alg, 0.0));
  raw.failed.assign(conditions.size(), std::vector<bool>(n_alg, false));
  raw.errors.assign(conditions.size(), std::vector<std::string>(n_alg));

  // Viewer behaviour is fixed per condition before any algorithm runs.
  std::vector<std::vector<int64_t>> watch(conditions.size());
  for (size_t i = 0; i < conditions.size(); ++i) {
    const Condition& c = conditions[i];
    watch[i] = SampleWatchDurations(
        plan.sequences[static_cast<size_t>(c.sequence_index)], c.seed);
  }

  const size_t total = conditions.size() * n_alg;
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t task = next.fetch_add(1); task < total;
         task = next.fetch_add(1)) {
      const size_t ci = task / n_alg;
      const size_t ai = task % n_alg;
      const Condition& c = conditions[ci];
      const AlgorithmSpec& spec = plan.algorithms[ai];
      const VideoSequence& sequence =
          plan.sequences[static_cast<size_t>(c.sequence_index)];
      try {
        Session session(sequence.videos,
                        plan.networks[static_cast<size_t>(c.network_index)],
                        watch[ci]);
        std::unique_ptr<Algorithm> algorithm =
            AlgorithmRegistry::Global().Create(spec.type, spec.params);
        AlgorithmContext context;
        context.window_size = session.window_size();
        context.ladder_kbps = sequence.videos.front()->ladder_kbps;
        context.seed = c.seed;
        algorithm->Initialize(context);
        const RunResult result =
            RunSession(session, *algorithm, plan.run_options);
        raw.scores[ci][ai] = result.qoe.score;
      } catch (const std::exception& e) {
        raw.failed[ci][ai] = true;
        raw.errors[ci][ai] = e.what();
      }
    }
  };
  const int workers = std::max(1, plan.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  for (size_t ci = 0; ci < conditions.size(); ++ci) {
    if (raw.failed[ci][static_cast<size_t>(baseline)]) {
      throw Error(ErrorCode::kAlgorithmError,
                  "baseline failed on condition " + std::to_string(ci) + ": " +
                      raw.errors[ci][static_cast<size_t>(baseline)]);
    }
    for (size_t ai = 0; ai < n_alg; ++ai) {
      if (raw.failed[ci][ai]) {
        raw.scores[ci][ai] = raw.scores[ci][static_cast<size_t>(baseline)];
      }
    }
  }
  return raw;
}

std::vector<ConditionResult> Normalize(const RawScores& raw,
                                       const std::string& baseline,
                                       NormalizationMode mode) {
  const size_t base = static_cast<size_t>(ColumnOf(raw.algorithms, baseline));
  std::vector<ConditionResult> results;
  results.reserve(raw.scores.size());
  for (const std::vector<double>& row : raw.scores) {
    ConditionResult r;
    r.max = *std::max_element(row.begin(), row.end());
    r.min = row[base];
    r.degenerate = r.max == r.min;
    r.normalized.assign(row.size(), 0.0);
    if (!r.degenerate) {
      const double range = r.max - r.min;
      for (size_t a = 0; a < row.size(); ++a) {
        r.normalized[a] = mode == NormalizationMode::kAnchored
                              ? (row[a] - r.max) / range
                              : (row[a] - r.min) / range;
      }
    }
    results.push_back(std::move(r));
  }
  return results;
}

RankingReport Rank(const std::vector<std::string>& algorithms,
                   const std::vector<ConditionResult>& results,
                   const std::vector<TraceCategory>& categories) {
  RankingReport report;
  for (const std::string& name : algorithms) {
    RankEntry entry;
    entry.algorithm = name;
    entry.category_totals.assign(3, 0.0);
    report.entries.push_back(std::move(entry));
  }
  for (size_t c = 0; c < results.size(); ++c) {
    for (size_t a = 0; a < algorithms.size(); ++a) {
      const double v = results[c].normalized[a];
      report.entries[a].total += v;
      if (c < categories.size()) {
        report.entries[a]
            .category_totals[static_cast<size_t>(categories[c])] += v;
      }
    }
  }
  std::sort(report.entries.begin(), report.entries.end(),
            [](const RankEntry& x, const RankEntry& y) {
              if (x.total != y.total) return x.total > y.total;
              return x.algorithm < y.algorithm;
            });
  for (size_t i = 0; i < report.entries.size(); ++i) {
    report.entries[i].rank = static_cast<int>(i) + 1;
  }
  return report;
}

std::vector<TraceCategory> ConditionCategories(
    const EvaluationPlan& plan, const std::vector<Condition>& conditions) {
  std::vector<TraceCategory> per_network;
  for (const auto& network : plan.networks) {
    per_network.push_back(Classify(*network, plan.thresholds));
  }
  std::vector<TraceCategory> categories;
  categories.reserve(conditions.size());
  for (const Condition& c : conditions) {
    categories.push_back(per_network[static_cast<size_t>(c.network_index)]);
  }
  return categories;
}

EvaluationOutcome RunEvaluation(const EvaluationPlan& plan) {
  plan.run_options.coefficients.Validate();
  EvaluationOutcome outcome;
  outcome.conditions =
      BuildGrid(plan.networks, plan.sequences, plan.user_samples, plan.seed);
  outcome.raw = Evaluate(plan, outcome.conditions);
  outcome.normalized =
      Normalize(outcome.raw, plan.baseline, plan.normalization);
  outcome.categories = ConditionCategories(plan, outcome.conditions);
  outcome.ranking =
      Rank(outcome.raw.algorithms, outcome.normalized, outcome.categories);
  return outcome;
}

namespace {

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
}

std::string ConditionColumns(const Condition& c) {
  return std::to_string(c.index) + ',' + c.network_id + ',' + c.sequence_id +
         ',' + std::to_string(c.user_sample) + ',' + std::to_string(c.seed);
}

const char* NormalizationName(NormalizationMode mode) {
  return mode == NormalizationMode::kAnchored ? "anchored" : "minmax";
}

}  // namespace

void WriteEvaluationOutputs(const EvaluationOutcome& outcome,
                            const EvaluationPlan& plan,
                            const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                "cannot create " + out_dir.string() + ": " + ec.message());
  }
  const auto& algorithms = outcome.raw.algorithms;
  std::string header = "condition,network,sequence,user_sample,seed";
  std::string names;
  for (const std::string& a : algorithms) names += ',' + a;

  std::string raw = header + names + '\n';
  for (size_t c = 0; c < outcome.conditions.size(); ++c) {
    raw += ConditionColumns(outcome.conditions[c]);
    for (double v : outcome.raw.scores[c]) {
      raw += ',' + internal::FormatDouble(v);
    }
    raw += '\n';
  }
  WriteText(out_dir / "raw_scores.csv", raw);

  std::string norm = header + ",max,min,degenerate" + names + '\n';
  for (size_t c = 0; c < outcome.conditions.size(); ++c) {
    const ConditionResult& r = outcome.normalized[c];
    norm += ConditionColumns(outcome.conditions[c]) + ',' +
            internal::FormatDouble(r.max) + ',' +
            internal::FormatDouble(r.min) + ',' +
            (r.degenerate ? "1" : "0");
    for (double v : r.normalized) norm += ',' + internal::FormatDouble(v);
    norm += '\n';
  }
  WriteText(out_dir / "normalized.csv", norm);

  std::string per_category = "algorithm,Low,Medium,High,total\n";
  for (const RankEntry& e : outcome.ranking.entries) {
    per_category += e.algorithm;
    for (double v : e.category_totals) {
      per_category += ',' + internal::FormatDouble(v);
    }
    per_category += ',' + internal::FormatDouble(e.total) + '\n';
  }
  WriteText(out_dir / "per_category.csv", per_category);

  nlohmann::ordered_json ranking;
  ranking["normalization"] = NormalizationName(plan.normalization);
  ranking["baseline"] = plan.baseline;
  ranking["conditions"] = outcome.conditions.size();
  ranking["user_samples"] = plan.user_samples;
  ranking["seed"] = plan.seed;
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const RankEntry& e : outcome.ranking.entries) {
    nlohmann::ordered_json j;
    j["rank"] = e.rank;
    j["algorithm"] = e.algorithm;
    j["total"] = e.total;
    j["per_category"] = {{"Low", e.category_totals[0]},
                         {"Medium", e.category_totals[1]},
                         {"High", e.category_totals[2]}};
    entries.push_back(std::move(j));
  }
  ranking["ranking"] = std::move(entries);
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (size_t c = 0; c < outcome.conditions.size(); ++c) {
    for (size_t a = 0; a < algorithms.size(); ++a) {
      if (!outcome.raw.failed[c][a]) continue;
      failures.push_back({{"condition", c},
                          {"algorithm", algorithms[a]},
                          {"error", outcome.raw.errors[c][a]}});
    }
  }
  ranking["failures"] = std::move(failures);
  WriteText(out_dir / "ranking.json", ranking.dump(2) + '\n');
}

// --- configuration ----------------------------------------------------------

namespace {

namespace pt = boost::property_tree;

std::string Trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> items;
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    std::string item = Trim(text.substr(start, comma - start));
    if (!item.empty()) items.push_back(std::move(item));
    start = comma + 1;
  }
  return items;
}

pt::ptree ReadIni(const std::filesystem::path& path) {
  pt::ptree tree;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ptree_error& e) {
    throw Error(ErrorCode::kConfigError,
                "config " + path.string() + ": " + e.what());
  }
  return tree;
}

// Section names in file order. read_ini drops sections without keys, so
// headers are collected from the raw text.
std::vector<std::string> SectionHeaders(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    line = Trim(line);
    if (line.size() > 2 && line.front() == '[' && line.back() == ']') {
      names.push_back(Trim(line.substr(1, line.size() - 2)));
    }
  }
  return names;
}

const pt::ptree* Section(const pt::ptree& tree, const std::string& name) {
  for (const auto& [key, child] : tree) {
    if (key == name) return &child;
  }
  return nullptr;
}

std::string Value(const pt::ptree* section, const std::string& key,
                  const std::string& fallback) {
  if (!section) return fallback;
  for (const auto& [k, child] : *section) {
    if (k == key) return Trim(child.data());
  }
  return fallback;
}

template <typename T>
T Number(const pt::ptree* section, const std::string& key, T fallback) {
  const std::string text = Value(section, key, "");
  if (text.empty()) return fallback;
  auto value = internal::ParseNumber<T>(text);
  if (!value) {
    throw Error(ErrorCode::kConfigError,
                "config key '" + key + "' has a bad value: " + text);
  }
  return *value;
}

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& item) {
  std::filesystem::path p(item);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

std::vector<std::shared_ptr<const NetworkTrace>> LoadNetworkDir(
    const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIoError, dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<std::shared_ptr<const NetworkTrace>> traces;
  for (const auto& f : files) {
    traces.push_back(std::make_shared<const NetworkTrace>(
        ParseNetworkTrace(ReadFileOrThrow(f), f.stem().string())));
  }
  return traces;
}

EvaluationPlan LoadEvaluationConfig(const std::filesystem::path& path) {
  const pt::ptree tree = ReadIni(path);
  const std::filesystem::path base = path.parent_path();
  EvaluationPlan plan;

  const pt::ptree* evaluation = Section(tree, "evaluation");
  plan.seed = Number<uint64_t>(evaluation, "seed", 0);
  plan.user_samples =
      Number<int>(evaluation, "user_samples", kDefaultUserSamples);
  plan.workers = Number<int>(evaluation, "workers", 1);
  plan.baseline = Value(evaluation, "baseline", "no_prefetch");
  plan.run_options.max_steps =
      Number<int64_t>(evaluation, "max_steps", kDefaultMaxSteps);
  const std::string thresholds = Value(evaluation, "thresholds", "");
  if (!thresholds.empty()) plan.thresholds = ParseThresholds(thresholds);
  const std::string normalization = Value(evaluation, "normalization", "anchored");
  if (normalization == "anchored") {
    plan.normalization = NormalizationMode::kAnchored;
  } else if (normalization == "minmax") {
    plan.normalization = NormalizationMode::kMinMax;
  } else {
    throw Error(ErrorCode::kConfigError,
                "normalization must be 'anchored' or 'minmax'");
  }

  const pt::ptree* qoe = Section(tree, "qoe");
  QoeCoefficients& k = plan.run_options.coefficients;
  k.alpha = Number<double>(qoe, "alpha", k.alpha);
  k.beta = Number<double>(qoe, "beta", k.beta);
  k.gamma = Number<double>(qoe, "gamma", k.gamma);
  k.theta = Number<double>(qoe, "theta", k.theta);
  k.Validate();

  const pt::ptree* inputs = Section(tree, "inputs");
  std::set<std::string> seen_ids;
  auto add_network = [&](std::shared_ptr<const NetworkTrace> trace) {
    if (!seen_ids.insert(trace->id()).second) {
      throw Error(ErrorCode::kConfigError,
                  "duplicate network trace id '" + trace->id() + "'");
    }
    plan.networks.push_back(std::move(trace));
  };
  for (const std::string& dir : SplitList(Value(inputs, "network_dirs", ""))) {
    for (auto& trace : LoadNetworkDir(Resolve(base, dir))) {
      add_network(std::move(trace));
    }
  }
  for (const std::string& f : SplitList(Value(inputs, "network_files", ""))) {
    const std::filesystem::path p = Resolve(base, f);
    add_network(std::make_shared<const NetworkTrace>(
        ParseNetworkTrace(ReadFileOrThrow(p), p.stem().string())));
  }
  for (const std::string& m : SplitList(Value(inputs, "manifests", ""))) {
    plan.sequences.push_back(LoadManifest(Resolve(base, m)));
  }

  const std::string prefix = "algorithm.";
  for (const std::string& key : SectionHeaders(path)) {
    if (key.rfind(prefix, 0) != 0) continue;
    AlgorithmSpec spec;
    spec.name = key.substr(prefix.size());
    spec.type = spec.name;
    if (const pt::ptree* section = Section(tree, key)) {
      for (const auto& [param, child] : *section) {
        if (param == "type") {
          spec.type = Trim(child.data());
        } else {
          spec.params[param] = Trim(child.data());
        }
      }
    }
    if (spec.name.empty()) {
      throw Error(ErrorCode::kConfigError, "algorithm section without a name");
    }
    plan.algorithms.push_back(std::move(spec));
  }
  if (plan.networks.empty() || plan.sequences.empty() ||
      plan.algorithms.empty()) {
    throw Error(ErrorCode::kEmptyInput,
                "config must list network traces, manifests and algorithms");
  }
  bool has_baseline = false;
  for (const AlgorithmSpec& spec : plan.algorithms) {
    has_baseline = has_baseline || spec.name == plan.baseline;
  }
  if (!has_baseline) {
    throw Error(ErrorCode::kMissingBaseline,
                "baseline '" + plan.baseline + "' has no [algorithm.] section");
  }
  return plan;
}

AlgorithmParams LoadParamsFile(const std::filesystem::path& path) {
  const pt::ptree tree = ReadIni(path);
  AlgorithmParams params;
  for (const auto& [key, child] : tree) {
    if (!child.empty()) {
      throw Error(ErrorCode::kConfigError,
                  "parameter file " + path.string() +
                      " must not contain sections");
    }
    params[key] = Trim(child.data());
  }
  return params;
}

}  // namespace svsim
