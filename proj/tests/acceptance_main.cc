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


// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <thread>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "svsim/algorithm.h"
#include "svsim/harness.h"
#include "svsim/retention.h"
#include "svsim/runner.h"
#include "svsim/scoring.h"
#include "svsim/session.h"
#include "svsim/video_trace.h"
#include "test_util.h"

namespace svsim {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// --- 1 ----------------------------------------------------------------------

Verdict UtilityConstants() {
  StepRecord stall;
  stall.sleep_ms = 1000;
  stall.delay_ms = 1000;
  stall.rebuf_ms = 1000;
  stall.rebuf_video_id = 0;
  VideoRecord idle;
  idle.chunk_count = 1;
  idle.duration_ms = 1000;
  const double u1 = ScoreSession({{idle}, {stall}, true}, {}).score;

  StepRecord top;
  top.is_download = true;
  top.video_id = 0;
  top.chunk = 0;
  top.level = 2;
  top.video_size_bits = 1'850'000;
  top.rebuf_video_id = 0;
  VideoRecord watched = idle;
  watched.watch_duration_ms = 1000;
  watched.played_ms = 1000;
  watched.started = true;
  const double u2 = ScoreSession({{watched}, {top}, true}, {}).score;

  return {std::abs(u1 + 1.85) < 1e-9 && std::abs(u2 - 0.925) < 1e-9,
          Fmt("stall U=%.12f, top chunk U=%.12f", u1, u2)};
}

// --- 2 ----------------------------------------------------------------------

Verdict DownloadTimeOracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int64_t> bits(1, 20'000'000);
  int mismatches = 0;
  for (int i = 0; i < 10'000; ++i) {
    const auto trace = testing::RandomTrace(rng, 8);
    const auto table = testing::RatePerMs(
        {trace->points().begin(), trace->points().end()});
    std::uniform_int_distribution<int64_t> at(0, 3 * trace->period_ms());
    const int64_t t0 = at(rng);
    const int64_t b = bits(rng);
    if (trace->DownloadTimeMs(t0, b) !=
        testing::BruteForceDownloadMs(table, t0, b)) {
      ++mismatches;
    }
  }
  const double s = Seconds(start);
  return {mismatches == 0 && s < 10.0,
          Fmt("%d mismatches of 10000, %.2f s", mismatches, s)};
}

// --- 3 ----------------------------------------------------------------------

Verdict Conservation() {
  const auto start = Clock::now();
  const VideoSequence seq = testing::SampleSequence();
  std::mt19937_64 rng(77);
  int violations = 0;
  std::string first;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok && violations++ == 0) first = what;
  };
  for (int i = 0; i < 1000; ++i) {
    const auto net = testing::RandomTrace(rng);
    const auto watch = SampleWatchDurations(seq, rng());
    Session session(seq.videos, net, watch);
    RandomAlgorithm algo(AlgorithmParams{{"sleep_probability", "0.15"}});
    algo.Initialize({.seed = rng()});
    const RunResult r = RunSession(session, algo);
    const Trajectory& t = r.trajectory;

    int64_t delay = 0, played = 0, bits = 0;
    for (size_t k = 0; k < t.steps.size(); ++k) {
      const StepRecord& s = t.steps[k];
      delay += s.delay_ms;
      played += s.played_ms;
      if (s.is_download) {
        const VideoAsset& v = *seq.videos[static_cast<size_t>(s.video_id)];
        check(s.video_size_bits == v.ChunkBits(s.chunk, s.level), "chunk size");
        bits += s.video_size_bits;
      }
      const bool last = k + 1 == t.steps.size();
      check(last ? s.played_ms + s.rebuf_ms <= s.delay_ms
                 : s.played_ms + s.rebuf_ms == s.delay_ms,
            "stall closure");
    }
    int64_t watch_total = 0;
    for (int64_t w : watch) watch_total += w;
    for (const VideoRecord& v : t.videos) {
      check(v.played_ms == v.watch_duration_ms, "video played == watch");
    }
    check(delay == session.clock_ms(), "clock");
    check(played == watch_total, "played total");
    check(bits == r.waste.downloaded_bits, "bit ledger");
    check(r.waste.wasted_bits >= 0 && r.waste.wasted_bits <= bits, "waste");
  }
  const double s = Seconds(start);
  return {violations == 0 && s < 30.0,
          Fmt("1000 sessions, %d violations%s%s, %.2f s", violations,
              violations ? ", first: " : "", first.c_str(), s)};
}

// --- 4 ----------------------------------------------------------------------

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict CliDeterminism(const fs::path& work) {
  const fs::path ini = work / "det.ini";
  const fs::path sample = testing::SampleDir();
  std::ofstream(ini) << "[evaluation]\nseed = 99\nuser_samples = 10\n"
                        "baseline = no_prefetch\n[inputs]\nnetwork_dirs = "
                     << (sample / "network").string()
                     << "\nmanifests = " << (sample / "manifest.json").string()
                     << "\n[algorithm.no_prefetch]\n[algorithm.fixed_prefetch]\n"
                        "[algorithm.threshold]\n[algorithm.random]\n"
                        "[algorithm.oracle]\n";
  bool ok = true;
  for (int workers : {1, 8}) {
    const std::string cmd = std::string(SVSIM_CLI) + " evaluate --config " +
                            ini.string() + " --out " +
                            (work / ("w" + std::to_string(workers))).string() +
                            " --workers " + std::to_string(workers) +
                            " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    ok = ok && WIFEXITED(status) && WEXITSTATUS(status) == 0;
  }
  if (!ok) return {false, "svsim evaluate failed"};
  const bool raw = Slurp(work / "w1" / "raw_scores.csv") ==
                   Slurp(work / "w8" / "raw_scores.csv");
  const bool ranking =
      Slurp(work / "w1" / "ranking.json") == Slurp(work / "w8" / "ranking.json");
  return {raw && ranking, Fmt("raw_scores.csv %s, ranking.json %s",
                              raw ? "identical" : "DIFFER",
                              ranking ? "identical" : "DIFFER")};
}

// --- 5 ----------------------------------------------------------------------

Verdict RetentionConvergence() {
  const auto start = Clock::now();
  std::vector<std::pair<std::string, RetentionCurve>> curves{
      {"example", testing::ExampleCurve()}};
  std::vector<int64_t> durations{3000};
  for (const auto& v : testing::SampleSequence().videos) {
    curves.push_back({v->name, *v->retention});
    durations.push_back(v->duration_ms);
  }
  bool ok = true;
  std::string detail;
  for (size_t i = 0; i < curves.size(); ++i) {
    double medians[3];
    const int ns[3] = {25, 50, 100};
    for (int k = 0; k < 3; ++k) {
      Rng rng(DeriveSeed(5, i * 3 + static_cast<size_t>(k)));
      medians[k] = SamplingDeviation(curves[i].second, durations[i], ns[k], 100, rng)
                       .median;
    }
    const bool good = medians[0] > medians[1] && medians[1] > medians[2] &&
                      medians[1] < 0.12;
    ok = ok && good;
    detail += Fmt("%s%s %.4f/%.4f/%.4f%s", detail.empty() ? "" : "; ",
                  curves[i].first.c_str(), medians[0], medians[1], medians[2],
                  good ? "" : " (!)");
  }
  const double s = Seconds(start);
  ok = ok && s < 5.0;
  return {ok, detail + Fmt("; %.2f s", s)};
}

// --- grid shared by 6, 7 and 8 -----------------------------------------------

std::vector<std::shared_ptr<const NetworkTrace>> CategoryTraces() {
  struct Regime {
    const char* prefix;
    double lo, hi;
    TraceCategory want;
  };
  const Regime regimes[] = {{"low", 0.2, 2.2, TraceCategory::kLow},
                            {"mid", 1.0, 3.5, TraceCategory::kMedium},
                            {"high", 2.5, 5.0, TraceCategory::kHigh}};
  std::vector<std::shared_ptr<const NetworkTrace>> out;
  for (const Regime& r : regimes) {
    int found = 0;
    for (uint64_t i = 0; found < 3; ++i) {
      SyntheticTraceParams p;
      p.min_bw_mbps = r.lo;
      p.max_bw_mbps = r.hi;
      p.seed = DeriveSeed(31337, i);
      NetworkTrace t = GenerateSyntheticTrace(
          p, std::string(r.prefix) + "_" + std::to_string(found));
      if (Classify(t, kPublicThresholds) != r.want) continue;
      out.push_back(std::make_shared<const NetworkTrace>(std::move(t)));
      ++found;
    }
  }
  return out;
}

struct Grid {
  EvaluationPlan plan;
  EvaluationOutcome outcome;
  double seconds = 0.0;
};

Grid RunGrid() {
  Grid g;
  g.plan.networks = CategoryTraces();
  g.plan.sequences = {testing::SampleSequence()};
  g.plan.algorithms = {{"no_prefetch", "no_prefetch", {}},
                       {"fixed_prefetch", "fixed_prefetch", {}},
                       {"threshold", "threshold", {}},
                       {"oracle", "oracle", {}}};
  g.plan.baseline = "no_prefetch";
  g.plan.user_samples = 50;
  g.plan.seed = 2024;
  g.plan.thresholds = kPublicThresholds;
  g.plan.workers = std::max(1u, std::thread::hardware_concurrency());
  const auto start = Clock::now();
  g.outcome = RunEvaluation(g.plan);
  g.seconds = Seconds(start);
  return g;
}

Verdict NormalizationChecks(const Grid& g) {
  const auto& raw = g.outcome.raw;
  int bad = 0, nondegenerate = 0;
  for (const ConditionResult& r : g.outcome.normalized) {
    if (r.degenerate) continue;
    ++nondegenerate;
    if (r.normalized[0] != -1.0) ++bad;  // baseline column
    if (*std::max_element(r.normalized.begin(), r.normalized.end()) != 0.0) ++bad;
  }
  const auto minmax =
      Normalize(raw, g.plan.baseline, NormalizationMode::kMinMax);
  const RankingReport a = g.outcome.ranking;
  const RankingReport b = Rank(raw.algorithms, minmax, g.outcome.categories);
  bool same = a.entries.size() == b.entries.size();
  for (size_t i = 0; same && i < a.entries.size(); ++i) {
    same = a.entries[i].algorithm == b.entries[i].algorithm;
  }
  return {bad == 0 && same && nondegenerate > 0,
          Fmt("%d non-degenerate conditions, %d violations, orderings %s",
              nondegenerate, bad, same ? "equal" : "DIFFER")};
}

Verdict OracleDominance(const Grid& g) {
  const auto& raw = g.outcome.raw;
  const size_t oracle = 3;
  const size_t n = raw.scores.size();
  bool ok = g.seconds < 120.0;
  std::string detail = Fmt("%zu conditions", n);
  double oracle_total = 0;
  for (const auto& row : raw.scores) oracle_total += row[oracle];
  for (size_t a = 0; a < oracle; ++a) {
    size_t wins = 0;
    double total = 0;
    for (const auto& row : raw.scores) {
      wins += row[oracle] >= row[a];
      total += row[a];
    }
    const double share = static_cast<double>(wins) / static_cast<double>(n);
    ok = ok && share >= 0.99 && oracle_total > total;
    detail += Fmt("; vs %s %.1f%% (total %.1f vs %.1f)",
                  raw.algorithms[a].c_str(), 100 * share, oracle_total, total);
  }
  for (const auto& row : raw.failed) {
    for (bool f : row) ok = ok && !f;
  }
  return {ok, detail + Fmt("; %.1f s", g.seconds)};
}

Verdict ThresholdVsNoPrefetch(const Grid& g) {
  double threshold = 0, none = 0;
  for (const RankEntry& e : g.outcome.ranking.entries) {
    if (e.algorithm == "threshold") threshold = e.total;
    if (e.algorithm == "no_prefetch") none = e.total;
  }
  int nondegenerate = 0;
  for (const ConditionResult& r : g.outcome.normalized) nondegenerate += !r.degenerate;
  // Each non-degenerate condition spans a normalized range of exactly 1.
  const double slack = 0.05 * nondegenerate;
  return {threshold >= none - slack,
          Fmt("threshold %.3f, no_prefetch %.3f, allowed shortfall %.3f",
              threshold, none, slack)};
}

// --- 9 ----------------------------------------------------------------------

Verdict Throughput() {
  const VideoSequence seq = testing::SampleSequence();
  std::vector<std::shared_ptr<const NetworkTrace>> nets;
  for (const auto& e : fs::directory_iterator(testing::SampleDir() / "network")) {
    nets.push_back(std::make_shared<const NetworkTrace>(
        ParseNetworkTrace(Slurp(e.path()), e.path().stem().string())));
  }
  std::sort(nets.begin(), nets.end(),
            [](const auto& a, const auto& b) { return a->id() < b->id(); });
  const auto start = Clock::now();
  double total = 0;
  for (int i = 0; i < 1000; ++i) {
    Session s(seq.videos, nets[static_cast<size_t>(i) % nets.size()],
              SampleWatchDurations(seq, DeriveSeed(9, static_cast<uint64_t>(i))));
    ThresholdAlgorithm a;
    a.Initialize({});
    total += RunSession(s, a).qoe.score;
  }
  const double sec = Seconds(start);
  return {sec < 10.0, Fmt("1000 threshold sessions in %.2f s (mean U %.2f)",
                          sec, total / 1000)};
}

// --- 10 ---------------------------------------------------------------------

Verdict RetentionFormat() {
  const RetentionCurve c = ParseRetentionTrace(testing::kExampleCurveText);
  const std::vector<RetentionPoint> want{
      {0, 1.0}, {1, 0.9298}, {2, 0.8324}, {3, 0.7298}, {4, 0.0}};
  bool same = c.entries().size() == want.size();
  for (size_t i = 0; same && i < want.size(); ++i) {
    same = c.entries()[i].second == want[i].second &&
           c.entries()[i].fraction == want[i].fraction;
  }
  const bool round_trip = SerializeRetentionCurve(c) == testing::kExampleCurveText;
  return {same && round_trip, Fmt("entries %s, re-serialization %s",
                                  same ? "match" : "DIFFER",
                                  round_trip ? "identical" : "DIFFERS")};
}

int Main() {
  const fs::path work = fs::temp_directory_path() / "svsim_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  std::vector<std::pair<std::string, std::function<Verdict()>>> criteria;
  criteria.push_back({"utility constants", UtilityConstants});
  criteria.push_back({"download-time oracle", DownloadTimeOracle});
  criteria.push_back({"engine conservation", Conservation});
  criteria.push_back({"evaluate determinism", [&] { return CliDeterminism(work); }});
  criteria.push_back({"retention convergence", RetentionConvergence});
  std::optional<Grid> grid;
  auto with_grid = [&](Verdict (*f)(const Grid&)) {
    return [&grid, f] {
      if (!grid) grid = RunGrid();
      return f(*grid);
    };
  };
  criteria.push_back({"normalization", with_grid(NormalizationChecks)});
  criteria.push_back({"oracle dominance", with_grid(OracleDominance)});
  criteria.push_back({"threshold vs no_prefetch", with_grid(ThresholdVsNoPrefetch)});
  criteria.push_back({"session throughput", Throughput});
  criteria.push_back({"retention format", RetentionFormat});

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("%s criterion %zu: %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(work);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace svsim

int main() { return svsim::Main(); }
