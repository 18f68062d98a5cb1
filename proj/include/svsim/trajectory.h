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


#ifndef SVSIM_TRAJECTORY_H_
#define SVSIM_TRAJECTORY_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "svsim/video_trace.h"

namespace svsim {

// Ledger entry for one simulator step.
struct StepRecord {
  int step = 0;
  bool is_download = false;
  int slot = -1;           // download only
  int64_t sleep_ms = 0;    // sleep only

  int64_t delay_ms = 0;
  int64_t rebuf_ms = 0;
  // Playback progress made during the step. delay = played + rebuf, except
  // on the step that ends the session, where the tail is idle.
  int64_t played_ms = 0;
  int64_t video_size_bits = 0;
  int play_video_id = 0;
  bool end_of_video = false;
  std::vector<int64_t> buffers_ms;

  // Download only: which chunk was fetched.
  int video_id = -1;
  int chunk = -1;
  int level = -1;

  // Video charged with this step's stall: the downloaded chunk's owner, or
  // for sleeps the video that was playing when the stall began.
  int rebuf_video_id = -1;

  bool operator==(const StepRecord&) const = default;
};

struct VideoRecord {
  int video_id = 0;
  std::string name;
  int chunk_count = 0;
  int64_t chunk_duration_ms = kDefaultChunkDurationMs;
  int64_t duration_ms = 0;
  std::array<double, kLevelCount> ladder_kbps = kDefaultLadderKbps;
  int64_t watch_duration_ms = 0;
  int64_t played_ms = 0;
  bool started = false;

  // A chunk counts as played once playback passes its start.
  bool ChunkPlayed(int chunk) const {
    return static_cast<int64_t>(chunk) * chunk_duration_ms < played_ms;
  }

  bool operator==(const VideoRecord&) const = default;
};

struct Trajectory {
  std::vector<VideoRecord> videos;
  std::vector<StepRecord> steps;
  bool completed = false;

  bool operator==(const Trajectory&) const = default;
};

// JSON Lines: a {"kind":"session"} header carrying the video records, then
// one {"kind":"step"} record per step.
void WriteTrajectoryJsonl(const Trajectory& trajectory, std::ostream& out);
Trajectory ReadTrajectoryJsonl(std::istream& in);

}  // namespace svsim

#endif  // SVSIM_TRAJECTORY_H_
