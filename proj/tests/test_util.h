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


// Shared fixtures and brute-force reference models for the tests.

#ifndef SVSIM_TESTS_TEST_UTIL_H_
#define SVSIM_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "svsim/network_trace.h"
#include "svsim/session.h"
#include "svsim/video_trace.h"

namespace svsim::testing {

inline std::filesystem::path DataDir() { return SVSIM_DATA_DIR; }
inline std::filesystem::path SampleDir() { return DataDir() / "sample"; }

inline VideoSequence SampleSequence() {
  return LoadManifest(SampleDir() / "manifest.json");
}

inline constexpr const char* kExampleCurveText =
    "0 1\n1 0.9298\n2 0.8324\n3 0.7298\n4 0\n";

inline RetentionCurve ExampleCurve() {
  return RetentionCurve(
      {{0, 1.0}, {1, 0.9298}, {2, 0.8324}, {3, 0.7298}, {4, 0.0}});
}

inline std::shared_ptr<const NetworkTrace> MakeTrace(
    std::vector<ThroughputPoint> points, std::string id = "t") {
  return std::make_shared<const NetworkTrace>(std::move(id),
                                              std::move(points));
}

inline std::shared_ptr<const NetworkTrace> ConstantTrace(double mbps) {
  return MakeTrace({{0.0, mbps}, {10.0, mbps}}, "const");
}

// A video whose every chunk has the same size at each level.
inline std::shared_ptr<const VideoAsset> UniformVideo(
    std::string name, int chunks, std::array<int64_t, kLevelCount> bytes,
    std::shared_ptr<const RetentionCurve> curve = nullptr,
    int64_t duration_ms = -1) {
  auto video = std::make_shared<VideoAsset>();
  video->name = std::move(name);
  video->sizes_bytes.assign(static_cast<size_t>(chunks), bytes);
  video->duration_ms =
      duration_ms >= 0 ? duration_ms : chunks * video->chunk_duration_ms;
  if (!curve) {
    std::vector<RetentionPoint> entries{{0, 1.0}};
    for (int s = 1; s <= chunks; ++s) entries.push_back({s, 0.5});
    entries.push_back({chunks + 1, 0.0});
    curve = std::make_shared<const RetentionCurve>(std::move(entries));
  }
  video->retention = std::move(curve);
  return video;
}

// Nominal sizes: exactly bitrate * 1 s at every level.
inline constexpr std::array<int64_t, kLevelCount> kNominalBytes = {
    93750, 150000, 231250};

// Random trace with ms-aligned timestamps and bps-aligned rates.
inline std::shared_ptr<const NetworkTrace> RandomTrace(std::mt19937_64& rng,
                                                       int max_points = 12) {
  std::uniform_int_distribution<int> count(2, max_points);
  std::uniform_int_distribution<int> gap_ms(1, 4000);
  std::uniform_int_distribution<int> kbps(100, 6000);
  std::vector<ThroughputPoint> points;
  int64_t t = 0;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    points.push_back({static_cast<double>(t) / 1000.0, kbps(rng) / 1000.0});
    t += gap_ms(rng);
  }
  return MakeTrace(std::move(points), "random");
}

// Per-millisecond rate table of one loop of the trace, in bits per second.
inline std::vector<int64_t> RatePerMs(const std::vector<ThroughputPoint>& pts) {
  std::vector<int64_t> ms;
  std::vector<int64_t> bps;
  for (const ThroughputPoint& p : pts) {
    ms.push_back(std::llround(p.timestamp_s * 1000.0));
    bps.push_back(std::llround(p.mbps * 1e6));
  }
  const int64_t period = ms.back() + (ms.back() - ms[ms.size() - 2]);
  std::vector<int64_t> table(static_cast<size_t>(period));
  size_t seg = 0;
  for (int64_t t = 0; t < period; ++t) {
    while (seg + 1 < ms.size() && ms[seg + 1] <= t) ++seg;
    table[static_cast<size_t>(t)] = bps[seg];
  }
  return table;
}

// 1 ms accumulator: one millisecond at r bps delivers r millibits.
inline int64_t BruteForceDownloadMs(const std::vector<int64_t>& rate_table,
                                    int64_t start_ms, int64_t bits) {
  const int64_t period = static_cast<int64_t>(rate_table.size());
  const int64_t goal = bits * 1000;
  int64_t delivered = 0;
  int64_t t = 0;
  while (delivered < goal) {
    delivered += rate_table[static_cast<size_t>((start_ms + t) % period)];
    ++t;
  }
  return t;
}

// Millisecond-tick replica of the playback rules, used to check the engine
// step by step. Knows nothing about the engine's internals.
class TickModel {
 public:
  struct StepOutcome {
    int64_t delay_ms = 0;
    int64_t rebuf_ms = 0;
    int64_t played_ms = 0;
    std::vector<int64_t> buffers_ms;
    bool ended = false;
  };

  TickModel(std::vector<std::shared_ptr<const VideoAsset>> videos,
            const NetworkTrace& network, std::vector<int64_t> watch_ms,
            int window = kMaxWindow)
      : videos_(std::move(videos)),
        rate_table_(RatePerMs({network.points().begin(),
                               network.points().end()})),
        watch_(std::move(watch_ms)),
        window_(window),
        downloaded_chunks_(videos_.size(), 0),
        downloaded_ms_(videos_.size(), 0),
        played_(videos_.size(), 0) {
    ResolveSwipes();
  }

  bool ended() const { return ended_; }
  int head() const { return head_; }

  StepOutcome Step(const Decision& decision) {
    StepOutcome out;
    int video = -1;
    int chunk = -1;
    if (const auto* d = std::get_if<DownloadDecision>(&decision)) {
      video = head_ + d->slot;
      chunk = downloaded_chunks_[static_cast<size_t>(video)];
      const int64_t bits =
          videos_[static_cast<size_t>(video)]->ChunkBits(chunk, d->level);
      out.delay_ms = BruteForceDownloadMs(rate_table_, clock_, bits);
    } else {
      out.delay_ms = std::get<SleepDecision>(decision).duration_ms;
    }
    for (int64_t t = 0; t < out.delay_ms; ++t) {
      ResolveSwipes();
      if (ended_) continue;
      const size_t h = static_cast<size_t>(head_);
      if (played_[h] < std::min(downloaded_ms_[h], watch_[h])) {
        ++played_[h];
        ++out.played_ms;
      } else {
        ++out.rebuf_ms;
      }
    }
    ResolveSwipes();
    if (video >= 0) {
      ++downloaded_chunks_[static_cast<size_t>(video)];
      if (video >= head_) {
        downloaded_ms_[static_cast<size_t>(video)] +=
            videos_[static_cast<size_t>(video)]->ChunkDurationMs(chunk);
      }
    }
    clock_ += out.delay_ms;
    if (!ended_) {
      const int end = std::min(head_ + window_, static_cast<int>(videos_.size()));
      for (int v = head_; v < end; ++v) {
        out.buffers_ms.push_back(downloaded_ms_[static_cast<size_t>(v)] -
                                 played_[static_cast<size_t>(v)]);
      }
    }
    out.ended = ended_;
    return out;
  }

 private:
  void ResolveSwipes() {
    while (!ended_ && played_[static_cast<size_t>(head_)] ==
                          watch_[static_cast<size_t>(head_)]) {
      ++head_;
      if (head_ >= static_cast<int>(videos_.size())) ended_ = true;
    }
  }

  std::vector<std::shared_ptr<const VideoAsset>> videos_;
  std::vector<int64_t> rate_table_;
  std::vector<int64_t> watch_;
  int window_;
  std::vector<int> downloaded_chunks_;
  std::vector<int64_t> downloaded_ms_;
  std::vector<int64_t> played_;
  int head_ = 0;
  int64_t clock_ = 0;
  bool ended_ = false;
};

}  // namespace svsim::testing

#endif  // SVSIM_TESTS_TEST_UTIL_H_
