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


#ifndef SVSIM_SCORING_H_
#define SVSIM_SCORING_H_

#include <cstdint>
#include <vector>

#include "svsim/trajectory.h"

namespace svsim {

// Weights of the per-video utility
//   U_i = alpha * sum(R_j) - gamma * sum(S_j) - beta * sum(T_k) - theta * sum(bw_k)
// with R_j in Mbps, T_k in seconds and bw_k in megabits. beta equals the
// top ladder rate so a one-second stall costs one top-quality chunk.
struct QoeCoefficients {
  double alpha = 1.0;
  double beta = 1.85;
  double gamma = 1.0;
  double theta = 0.5;

  void Validate() const;
};

struct VideoQoe {
  int video_id = 0;
  double quality_sum = 0.0;         // sum of R_j over played chunks
  double smoothness_sum = 0.0;      // sum of |R_j - R_{j-1}| within the video
  double rebuf_seconds = 0.0;
  double bandwidth_megabits = 0.0;  // every completed chunk, played or not
  double rebuf_penalty = 0.0;       // beta * rebuf_seconds
  double bandwidth_cost = 0.0;      // theta * bandwidth_megabits
  double utility = 0.0;
  int played_chunks = 0;
  int downloaded_chunks = 0;
};

struct QoeBreakdown {
  std::vector<VideoQoe> videos;
  double quality_sum = 0.0;
  double smoothness_sum = 0.0;
  double rebuf_seconds = 0.0;
  double bandwidth_megabits = 0.0;
  double score = 0.0;  // sum of U_i
  // Reported alongside the score; not a term of U.
  double waste_megabits = 0.0;
};

// Throws Error(kIncompleteTrajectory) unless the session ran to the end.
QoeBreakdown ScoreSession(const Trajectory& trajectory,
                          const QoeCoefficients& coefficients);

enum class WasteCause {
  // Playback never advanced into the video (zero watch time, or the
  // session stopped before reaching it).
  kNeverPlayedVideo,
  // Chunks at or past the point where the viewer swiped away.
  kPastSwipePoint,
};

const char* WasteCauseName(WasteCause cause);

struct WastedChunk {
  int video_id = 0;
  int chunk = 0;
  int level = 0;
  int64_t bits = 0;
  WasteCause cause = WasteCause::kPastSwipePoint;
};

struct WasteReport {
  int64_t downloaded_bits = 0;
  int64_t wasted_bits = 0;
  int64_t never_played_video_bits = 0;
  int64_t past_swipe_point_bits = 0;
  double waste_megabits = 0.0;
  std::vector<WastedChunk> chunks;
};

WasteReport ComputeWaste(const Trajectory& trajectory);

}  // namespace svsim

#endif  // SVSIM_SCORING_H_
