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


#ifndef SVSIM_SESSION_H_
#define SVSIM_SESSION_H_

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "svsim/network_trace.h"
#include "svsim/trajectory.h"
#include "svsim/video_trace.h"

namespace svsim {

// Videos that may hold buffers at once, the playing one included.
inline constexpr int kMaxWindow = 5;

struct DownloadDecision {
  int slot = 0;  // window slot; 0 is the playing video
  int level = 0;

  bool operator==(const DownloadDecision&) const = default;
};

struct SleepDecision {
  int64_t duration_ms = 0;

  bool operator==(const SleepDecision&) const = default;
};

using Decision = std::variant<DownloadDecision, SleepDecision>;

// What an algorithm may see about one window slot. The viewer's real watch
// time is deliberately absent.
struct PlayerSnapshot {
  int video_id = 0;  // position in the sequence
  int chunk_count = 0;
  int downloaded_chunks = 0;
  int64_t buffer_ms = 0;
  int64_t played_ms = 0;
  int64_t duration_ms = 0;
  int64_t chunk_duration_ms = 0;
  // Size of the next chunk at each level; 0 once fully downloaded.
  std::array<int64_t, kLevelCount> next_chunk_bits{};
  std::array<double, kLevelCount> ladder_kbps{};
  std::shared_ptr<const RetentionCurve> retention;

  bool fully_downloaded() const { return downloaded_chunks == chunk_count; }
  bool operator==(const PlayerSnapshot&) const = default;
};

struct Observation {
  int64_t delay_ms = 0;
  int64_t rebuf_ms = 0;
  int64_t video_size_bits = 0;
  bool end_of_video = false;
  int play_video_id = 0;
  std::vector<PlayerSnapshot> players;
  bool first_step = false;

  bool operator==(const Observation&) const = default;
};

struct SessionConfig {
  int window_size = kMaxWindow;
};

// Everything the simulator knows, including the hidden watch times. Only
// full-knowledge reference algorithms receive this.
struct SessionKnowledge {
  std::vector<std::shared_ptr<const VideoAsset>> sequence;
  std::vector<int64_t> watch_durations_ms;
  std::shared_ptr<const NetworkTrace> network;
  int64_t clock_ms = 0;
};

// Chunk-level simulation of one viewer scrolling through a video sequence.
// Single-threaded; Step calls must be strictly ordered.
class Session {
 public:
  Session(std::vector<std::shared_ptr<const VideoAsset>> sequence,
          std::shared_ptr<const NetworkTrace> network,
          std::vector<int64_t> watch_durations_ms, SessionConfig config = {});

  // The observation handed to the algorithm before its first decision.
  Observation InitialObservation() const;

  Observation Step(const Decision& decision);

  bool ended() const { return ended_; }
  int64_t clock_ms() const { return clock_ms_; }
  int window_begin() const { return head_; }
  int window_end() const;
  int sequence_size() const { return static_cast<int>(sequence_.size()); }
  int window_size() const { return config_.window_size; }

  const Trajectory& trajectory() const { return trajectory_; }
  SessionKnowledge RevealKnowledge() const;

 private:
  struct PlayerState {
    int downloaded_chunks = 0;
    int64_t downloaded_ms = 0;
    int64_t played_ms = 0;
  };

  struct PlaybackResult {
    int64_t played_ms = 0;
    int64_t rebuf_ms = 0;
    int stall_video = -1;
  };

  PlaybackResult AdvancePlayback(int64_t wall_ms);
  void SwipeToNext();
  void SkipZeroWatchVideos();
  Observation MakeObservation(int64_t delay_ms, int64_t rebuf_ms,
                              int64_t video_size_bits,
                              bool end_of_video) const;
  StepRecord& RecordStep(const Decision& decision, const Observation& obs,
                         const PlaybackResult& playback);

  std::vector<std::shared_ptr<const VideoAsset>> sequence_;
  std::shared_ptr<const NetworkTrace> network_;
  std::vector<int64_t> watch_ms_;
  SessionConfig config_;

  std::vector<PlayerState> players_;
  int head_ = 0;  // sequence index of the playing video
  int64_t clock_ms_ = 0;
  bool ended_ = false;
  Trajectory trajectory_;
};

}  // namespace svsim

#endif  // SVSIM_SESSION_H_
