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


#include "svsim/scoring.h"

#include <cmath>
#include <string>

#include "svsim/errors.h"

namespace svsim {

void QoeCoefficients::Validate() const {
  for (double w : {alpha, beta, gamma, theta}) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidParams,
                  "QoE coefficients must be finite and >= 0");
    }
  }
}

namespace {

struct VideoLedger {
  std::vector<int> chunk_levels;  // -1 = not downloaded
  int64_t rebuf_ms = 0;
  int64_t downloaded_bits = 0;
  int downloaded_chunks = 0;
};

std::vector<VideoLedger> BuildLedgers(const Trajectory& trajectory) {
  std::vector<VideoLedger> ledgers(trajectory.videos.size());
  for (size_t i = 0; i < ledgers.size(); ++i) {
    ledgers[i].chunk_levels.assign(
        static_cast<size_t>(trajectory.videos[i].chunk_count), -1);
  }
  auto in_range = [&](int id) {
    return id >= 0 && static_cast<size_t>(id) < ledgers.size();
  };
  for (const StepRecord& step : trajectory.steps) {
    if (step.is_download) {
      if (!in_range(step.video_id) || step.chunk < 0 ||
          step.chunk >= trajectory.videos[static_cast<size_t>(step.video_id)]
                            .chunk_count ||
          step.level < 0 || step.level >= kLevelCount) {
        throw Error(ErrorCode::kIncompleteTrajectory,
                    "step " + std::to_string(step.step) +
                        " references an unknown chunk");
      }
      VideoLedger& ledger = ledgers[static_cast<size_t>(step.video_id)];
      ledger.chunk_levels[static_cast<size_t>(step.chunk)] = step.level;
      ledger.downloaded_bits += step.video_size_bits;
      ++ledger.downloaded_chunks;
    }
    if (step.rebuf_ms > 0) {
      if (!in_range(step.rebuf_video_id)) {
        throw Error(ErrorCode::kIncompleteTrajectory,
                    "step " + std::to_string(step.step) +
                        " has a stall without an owning video");
      }
      ledgers[static_cast<size_t>(step.rebuf_video_id)].rebuf_ms +=
          step.rebuf_ms;
    }
  }
  return ledgers;
}

}  // namespace

QoeBreakdown ScoreSession(const Trajectory& trajectory,
                          const QoeCoefficients& coefficients) {
  coefficients.Validate();
  if (!trajectory.completed) {
    throw Error(ErrorCode::kIncompleteTrajectory,
                "cannot score a session that has not ended");
  }
  const std::vector<VideoLedger> ledgers = BuildLedgers(trajectory);
  QoeBreakdown out;
  out.videos.reserve(ledgers.size());
  for (size_t i = 0; i < ledgers.size(); ++i) {
    const VideoRecord& video = trajectory.videos[i];
    const VideoLedger& ledger = ledgers[i];
    VideoQoe q;
    q.video_id = video.video_id;
    double previous_mbps = 0.0;
    for (int c = 0; c < video.chunk_count; ++c) {
      const int level = ledger.chunk_levels[static_cast<size_t>(c)];
      if (level < 0 || !video.ChunkPlayed(c)) break;
      const double mbps = video.ladder_kbps[static_cast<size_t>(level)] / 1000.0;
      q.quality_sum += mbps;
      if (c > 0) q.smoothness_sum += std::abs(mbps - previous_mbps);
      previous_mbps = mbps;
      ++q.played_chunks;
    }
    q.downloaded_chunks = ledger.downloaded_chunks;
    q.rebuf_seconds = static_cast<double>(ledger.rebuf_ms) / 1000.0;
    q.bandwidth_megabits = static_cast<double>(ledger.downloaded_bits) / 1e6;
    q.rebuf_penalty = coefficients.beta * q.rebuf_seconds;
    q.bandwidth_cost = coefficients.theta * q.bandwidth_megabits;
    q.utility = coefficients.alpha * q.quality_sum -
                coefficients.gamma * q.smoothness_sum - q.rebuf_penalty -
                q.bandwidth_cost;

    out.quality_sum += q.quality_sum;
    out.smoothness_sum += q.smoothness_sum;
    out.rebuf_seconds += q.rebuf_seconds;
    out.bandwidth_megabits += q.bandwidth_megabits;
    out.score += q.utility;
    out.videos.push_back(q);
  }
  out.waste_megabits = ComputeWaste(trajectory).waste_megabits;
  return out;
}

const char* WasteCauseName(WasteCause cause) {
  switch (cause) {
    case WasteCause::kNeverPlayedVideo:
      return "never_played_video";
    case WasteCause::kPastSwipePoint:
      return "past_swipe_point";
  }
  return "?";
}

WasteReport ComputeWaste(const Trajectory& trajectory) {
  WasteReport report;
  for (const StepRecord& step : trajectory.steps) {
    if (!step.is_download) continue;
    report.downloaded_bits += step.video_size_bits;
    if (step.video_id < 0 ||
        static_cast<size_t>(step.video_id) >= trajectory.videos.size()) {
      throw Error(ErrorCode::kIncompleteTrajectory,
                  "step " + std::to_string(step.step) +
                      " references an unknown video");
    }
    const VideoRecord& video =
        trajectory.videos[static_cast<size_t>(step.video_id)];
    if (video.ChunkPlayed(step.chunk)) continue;
    WastedChunk wasted;
    wasted.video_id = step.video_id;
    wasted.chunk = step.chunk;
    wasted.level = step.level;
    wasted.bits = step.video_size_bits;
    wasted.cause = video.played_ms > 0 ? WasteCause::kPastSwipePoint
                                       : WasteCause::kNeverPlayedVideo;
    report.wasted_bits += wasted.bits;
    if (wasted.cause == WasteCause::kNeverPlayedVideo) {
      report.never_played_video_bits += wasted.bits;
    } else {
      report.past_swipe_point_bits += wasted.bits;
    }
    report.chunks.push_back(wasted);
  }
  report.waste_megabits = static_cast<double>(report.wasted_bits) / 1e6;
  return report;
}

}  // namespace svsim
