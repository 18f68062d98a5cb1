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


#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "svsim/algorithm.h"
#include "svsim/errors.h"
#include "svsim/runner.h"
#include "svsim/scoring.h"
#include "svsim/session.h"
#include "test_util.h"

namespace svsim {
namespace {

VideoRecord Video(int id, int chunks, int64_t watch_ms, int64_t played_ms) {
  VideoRecord v;
  v.video_id = id;
  v.name = "v" + std::to_string(id);
  v.chunk_count = chunks;
  v.chunk_duration_ms = 1000;
  v.duration_ms = chunks * 1000LL;
  v.ladder_kbps = kDefaultLadderKbps;
  v.watch_duration_ms = watch_ms;
  v.played_ms = played_ms;
  v.started = played_ms > 0;
  return v;
}

StepRecord Download(int video, int chunk, int level, int64_t bits,
                    int64_t rebuf_ms = 0) {
  StepRecord s;
  s.is_download = true;
  s.video_id = video;
  s.chunk = chunk;
  s.level = level;
  s.video_size_bits = bits;
  s.rebuf_ms = rebuf_ms;
  s.rebuf_video_id = video;
  s.delay_ms = rebuf_ms;
  return s;
}

StepRecord Sleep(int64_t ms, int64_t rebuf_ms, int stalled_video) {
  StepRecord s;
  s.sleep_ms = ms;
  s.delay_ms = ms;
  s.rebuf_ms = rebuf_ms;
  s.rebuf_video_id = rebuf_ms > 0 ? stalled_video : -1;
  return s;
}

Trajectory Completed(std::vector<VideoRecord> videos,
                     std::vector<StepRecord> steps) {
  for (size_t i = 0; i < steps.size(); ++i) steps[i].step = static_cast<int>(i);
  return {std::move(videos), std::move(steps), true};
}

TEST(ScoreSession, TwoChunksMixedLevels) {
  // 0.75 + 1.85 - |1.85 - 0.75| - 0 - 0.5 * 2.6 = 0.2
  const Trajectory t =
      Completed({Video(0, 2, 2000, 2000)},
                {Download(0, 0, 0, 750'000), Download(0, 1, 2, 1'850'000)});
  const QoeBreakdown q = ScoreSession(t, {});
  EXPECT_NEAR(q.score, 0.2, 1e-12);
  ASSERT_EQ(q.videos.size(), 1u);
  EXPECT_NEAR(q.videos[0].quality_sum, 2.6, 1e-12);
  EXPECT_NEAR(q.videos[0].smoothness_sum, 1.1, 1e-12);
  EXPECT_NEAR(q.videos[0].bandwidth_megabits, 2.6, 1e-12);
  EXPECT_EQ(q.videos[0].played_chunks, 2);
}

TEST(ScoreSession, NothingHappened) {
  const QoeBreakdown q = ScoreSession(Completed({Video(0, 3, 0, 0)}, {}), {});
  EXPECT_EQ(q.score, 0.0);
  EXPECT_EQ(q.videos[0].utility, 0.0);
}

TEST(ScoreSession, OneSecondStall) {
  const Trajectory t = Completed({Video(0, 3, 0, 0)}, {Sleep(1000, 1000, 0)});
  EXPECT_EQ(ScoreSession(t, {}).score, -1.85);
}

TEST(ScoreSession, SinglePlayedTopChunk) {
  const Trajectory t =
      Completed({Video(0, 1, 1000, 1000)}, {Download(0, 0, 2, 1'850'000)});
  EXPECT_NEAR(ScoreSession(t, {}).score, 0.925, 1e-12);
}

TEST(ScoreSession, RequiresCompletedTrajectory) {
  Trajectory t = Completed({Video(0, 1, 1000, 0)}, {});
  t.completed = false;
  try {
    ScoreSession(t, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompleteTrajectory);
  }
}

TEST(ScoreSession, RejectsNegativeCoefficients) {
  QoeCoefficients k;
  k.theta = -1;
  EXPECT_THROW(ScoreSession(Completed({Video(0, 1, 0, 0)}, {}), k), Error);
}

TEST(ScoreSession, OnlyPlayedChunksEarnQuality) {
  // Played 1500 ms: chunks 0 and 1 started, chunk 2 did not.
  const Trajectory t = Completed(
      {Video(0, 3, 1500, 1500)},
      {Download(0, 0, 1, 1'200'000), Download(0, 1, 1, 1'200'000),
       Download(0, 2, 2, 1'850'000)});
  const QoeBreakdown q = ScoreSession(t, {});
  EXPECT_NEAR(q.quality_sum, 2.4, 1e-12);
  EXPECT_EQ(q.smoothness_sum, 0.0);
  EXPECT_NEAR(q.bandwidth_megabits, 4.25, 1e-12);
}

TEST(ScoreSession, SmoothnessStopsAtVideoBoundary) {
  const Trajectory t = Completed(
      {Video(0, 1, 1000, 1000), Video(1, 1, 1000, 1000)},
      {Download(0, 0, 0, 750'000), Download(1, 0, 2, 1'850'000)});
  EXPECT_EQ(ScoreSession(t, {}).smoothness_sum, 0.0);
}

TEST(ScoreSession, StallAttribution) {
  const Trajectory t = Completed(
      {Video(0, 1, 1000, 1000), Video(1, 1, 1000, 1000)},
      {Download(1, 0, 0, 750'000, 300), Sleep(500, 200, 0)});
  const QoeBreakdown q = ScoreSession(t, {});
  EXPECT_DOUBLE_EQ(q.videos[0].rebuf_seconds, 0.2);
  EXPECT_DOUBLE_EQ(q.videos[1].rebuf_seconds, 0.3);
}

// --- properties on engine-produced trajectories ---------------------------

std::vector<Trajectory> SomeTrajectories() {
  const VideoSequence seq = testing::SampleSequence();
  std::vector<Trajectory> out;
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    SyntheticTraceParams p;
    p.seed = rng();
    auto net = std::make_shared<const NetworkTrace>(GenerateSyntheticTrace(p, "n"));
    std::vector<int64_t> watch;
    for (const auto& v : seq.videos) {
      std::uniform_int_distribution<int64_t> w(0, v->duration_ms);
      watch.push_back(w(rng));
    }
    Session s(seq.videos, net, watch);
    auto algo = AlgorithmRegistry::Global().Create(
        i % 2 ? "random" : "fixed_prefetch");
    algo->Initialize({.seed = rng()});
    out.push_back(RunSession(s, *algo).trajectory);
  }
  return out;
}

TEST(ScoringProperties, UtilityIdentityHolds) {
  const QoeCoefficients k{1.3, 2.1, 0.7, 0.4};
  for (const Trajectory& t : SomeTrajectories()) {
    const QoeBreakdown q = ScoreSession(t, k);
    double sum = 0;
    for (const VideoQoe& v : q.videos) {
      EXPECT_EQ(v.utility, k.alpha * v.quality_sum - k.gamma * v.smoothness_sum -
                               k.beta * v.rebuf_seconds -
                               k.theta * v.bandwidth_megabits);
      sum += v.utility;
    }
    EXPECT_EQ(q.score, sum);
  }
}

TEST(ScoringProperties, ScalingSizesScalesOnlyBandwidth) {
  for (const Trajectory& t : SomeTrajectories()) {
    Trajectory scaled = t;
    for (StepRecord& s : scaled.steps) s.video_size_bits *= 3;
    const QoeBreakdown a = ScoreSession(t, {});
    const QoeBreakdown b = ScoreSession(scaled, {});
    EXPECT_EQ(a.quality_sum, b.quality_sum);
    EXPECT_EQ(a.smoothness_sum, b.smoothness_sum);
    for (size_t i = 0; i < a.videos.size(); ++i) {
      EXPECT_DOUBLE_EQ(b.videos[i].bandwidth_cost, 3 * a.videos[i].bandwidth_cost);
    }
  }
}

TEST(ScoringProperties, ExtraWastedChunkCostsItsBandwidth) {
  for (const Trajectory& t : SomeTrajectories()) {
    // Find a video with a chunk that was never downloaded and never played.
    for (const VideoRecord& v : t.videos) {
      std::vector<bool> have(static_cast<size_t>(v.chunk_count));
      for (const StepRecord& s : t.steps) {
        if (s.is_download && s.video_id == v.video_id) {
          have[static_cast<size_t>(s.chunk)] = true;
        }
      }
      int chunk = -1;
      for (int c = v.chunk_count - 1; c >= 0; --c) {
        if (!have[static_cast<size_t>(c)] && !v.ChunkPlayed(c)) chunk = c;
        if (have[static_cast<size_t>(c)]) break;
      }
      if (chunk < 0) continue;
      Trajectory more = t;
      more.steps.push_back(Download(v.video_id, chunk, 1, 1'234'567));
      const QoeBreakdown a = ScoreSession(t, {});
      const QoeBreakdown b = ScoreSession(more, {});
      EXPECT_NEAR(a.score - b.score, 0.5 * 1.234567, 1e-9);
      EXPECT_LT(b.score, a.score);
      EXPECT_EQ(ComputeWaste(more).wasted_bits,
                ComputeWaste(t).wasted_bits + 1'234'567);
      break;
    }
  }
}

TEST(ScoringProperties, SingleLevelMeansNoSmoothnessPenalty) {
  const VideoSequence seq = testing::SampleSequence();
  Session s(seq.videos, testing::ConstantTrace(2.0),
            {17000, 26000, 1000, 5000, 0, 6000, 125000});
  FixedPrefetchAlgorithm algo(AlgorithmParams{{"level", "2"}});
  const RunResult r = RunSession(s, algo);
  EXPECT_EQ(r.qoe.smoothness_sum, 0.0);
}

TEST(ScoringProperties, PureAndTiedToByteLedger) {
  for (const Trajectory& t : SomeTrajectories()) {
    const QoeBreakdown a = ScoreSession(t, {});
    const QoeBreakdown b = ScoreSession(t, {});
    EXPECT_EQ(a.score, b.score);
    int64_t bits = 0;
    for (const StepRecord& s : t.steps) bits += s.video_size_bits;
    double cost = 0;
    for (const VideoQoe& v : a.videos) cost += v.bandwidth_cost;
    EXPECT_NEAR(cost, 0.5 * static_cast<double>(bits) / 1e6, 1e-9);
  }
}

// --- waste ------------------------------------------------------------------

TEST(Waste, FullWatchSingleVideo) {
  const Trajectory t = Completed(
      {Video(0, 2, 2000, 2000)},
      {Download(0, 0, 0, 750'000), Download(0, 1, 0, 750'000)});
  EXPECT_EQ(ComputeWaste(t).wasted_bits, 0);
}

TEST(Waste, PrefetchedVideoNeverReached) {
  // The next video is skipped (zero watch time) after 3 prefetched chunks.
  const auto a = testing::UniformVideo("a", 2, testing::kNominalBytes);
  const auto b = testing::UniformVideo("b", 5, testing::kNominalBytes);
  Session s({a, b}, testing::ConstantTrace(5.0), {2000, 0});
  for (const Decision& d :
       {Decision{DownloadDecision{0, 1}}, Decision{DownloadDecision{1, 0}},
        Decision{DownloadDecision{1, 0}}, Decision{DownloadDecision{1, 0}},
        Decision{DownloadDecision{0, 1}}, Decision{SleepDecision{3000}}}) {
    s.Step(d);
  }
  ASSERT_TRUE(s.ended());
  const WasteReport w = ComputeWaste(s.trajectory());
  EXPECT_EQ(w.wasted_bits, 3 * 750'000);
  EXPECT_EQ(w.never_played_video_bits, 3 * 750'000);
  EXPECT_EQ(w.past_swipe_point_bits, 0);
  EXPECT_DOUBLE_EQ(w.waste_megabits, 2.25);
}

TEST(Waste, SwipeAtTwoSeconds) {
  std::vector<StepRecord> steps;
  for (int c = 0; c < 5; ++c) steps.push_back(Download(0, c, 1, 1'200'000));
  const Trajectory t = Completed({Video(0, 10, 2000, 2000)}, steps);
  const WasteReport w = ComputeWaste(t);
  ASSERT_EQ(w.chunks.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(w.chunks[static_cast<size_t>(i)].chunk, 2 + i);
    EXPECT_EQ(w.chunks[static_cast<size_t>(i)].cause, WasteCause::kPastSwipePoint);
  }
  EXPECT_EQ(w.wasted_bits, 3 * 1'200'000);
  EXPECT_EQ(ScoreSession(t, {}).waste_megabits, 3.6);
}

}  // namespace
}  // namespace svsim
