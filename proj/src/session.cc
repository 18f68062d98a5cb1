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


#include "svsim/session.h"

#include <algorithm>
#include <utility>

#include "svsim/errors.h"

namespace svsim {

Session::Session(std::vector<std::shared_ptr<const VideoAsset>> sequence,
                 std::shared_ptr<const NetworkTrace> network,
                 std::vector<int64_t> watch_durations_ms, SessionConfig config)
    : sequence_(std::move(sequence)),
      network_(std::move(network)),
      watch_ms_(std::move(watch_durations_ms)),
      config_(config) {
  if (sequence_.empty()) {
    throw Error(ErrorCode::kEmptySequence, "session needs at least one video");
  }
  if (!network_) {
    throw Error(ErrorCode::kInvalidParams, "session needs a network trace");
  }
  if (config_.window_size < 1 || config_.window_size > kMaxWindow) {
    throw Error(ErrorCode::kInvalidParams, "window size must be in [1, 5]");
  }
  if (watch_ms_.size() != sequence_.size()) {
    throw Error(ErrorCode::kDurationMismatch,
                "need exactly one watch duration per video");
  }
  players_.resize(sequence_.size());
  trajectory_.videos.reserve(sequence_.size());
  for (size_t i = 0; i < sequence_.size(); ++i) {
    const VideoAsset& video = *sequence_[i];
    if (watch_ms_[i] < 0 || watch_ms_[i] > video.duration_ms) {
      throw Error(ErrorCode::kDurationMismatch,
                  "watch duration of video " + std::to_string(i) + " ('" +
                      video.name + "') is outside [0, duration]");
    }
    VideoRecord record;
    record.video_id = static_cast<int>(i);
    record.name = video.name;
    record.chunk_count = video.chunk_count();
    record.chunk_duration_ms = video.chunk_duration_ms;
    record.duration_ms = video.duration_ms;
    record.ladder_kbps = video.ladder_kbps;
    record.watch_duration_ms = watch_ms_[i];
    trajectory_.videos.push_back(std::move(record));
  }
  trajectory_.videos[0].started = true;
  SkipZeroWatchVideos();
}

int Session::window_end() const {
  return std::min(head_ + config_.window_size, sequence_size());
}

void Session::SwipeToNext() {
  ++head_;
  if (head_ >= sequence_size()) {
    ended_ = true;
    trajectory_.completed = true;
    return;
  }
  trajectory_.videos[static_cast<size_t>(head_)].started = true;
  SkipZeroWatchVideos();
}

void Session::SkipZeroWatchVideos() {
  if (!ended_ && watch_ms_[static_cast<size_t>(head_)] == 0) SwipeToNext();
}

Session::PlaybackResult Session::AdvancePlayback(int64_t wall_ms) {
  PlaybackResult result;
  int64_t remaining = wall_ms;
  while (remaining > 0 && !ended_) {
    const size_t v = static_cast<size_t>(head_);
    PlayerState& player = players_[v];
    const int64_t playable =
        std::min(player.downloaded_ms, watch_ms_[v]) - player.played_ms;
    const int64_t advance = std::min(playable, remaining);
    player.played_ms += advance;
    remaining -= advance;
    result.played_ms += advance;
    trajectory_.videos[v].played_ms = player.played_ms;
    if (player.played_ms == watch_ms_[v]) {
      SwipeToNext();
      continue;
    }
    // Buffer ran dry. Chunks land only at step end, so the stall lasts for
    // the rest of the step.
    result.rebuf_ms += remaining;
    result.stall_video = head_;
    remaining = 0;
  }
  return result;
}

Observation Session::MakeObservation(int64_t delay_ms, int64_t rebuf_ms,
                                     int64_t video_size_bits,
                                     bool end_of_video) const {
  Observation obs;
  obs.delay_ms = delay_ms;
  obs.rebuf_ms = rebuf_ms;
  obs.video_size_bits = video_size_bits;
  obs.end_of_video = end_of_video;
  obs.play_video_id = std::min(head_, sequence_size() - 1);
  if (ended_) return obs;
  const int end = window_end();
  obs.players.reserve(static_cast<size_t>(end - head_));
  for (int v = head_; v < end; ++v) {
    const VideoAsset& video = *sequence_[static_cast<size_t>(v)];
    const PlayerState& player = players_[static_cast<size_t>(v)];
    PlayerSnapshot snap;
    snap.video_id = v;
    snap.chunk_count = video.chunk_count();
    snap.downloaded_chunks = player.downloaded_chunks;
    snap.buffer_ms = player.downloaded_ms - player.played_ms;
    snap.played_ms = player.played_ms;
    snap.duration_ms = video.duration_ms;
    snap.chunk_duration_ms = video.chunk_duration_ms;
    if (player.downloaded_chunks < video.chunk_count()) {
      for (int q = 0; q < kLevelCount; ++q) {
        snap.next_chunk_bits[static_cast<size_t>(q)] =
            video.ChunkBits(player.downloaded_chunks, q);
      }
    }
    snap.ladder_kbps = video.ladder_kbps;
    snap.retention = video.retention;
    obs.players.push_back(std::move(snap));
  }
  return obs;
}

Observation Session::InitialObservation() const {
  Observation obs = MakeObservation(0, 0, 0, false);
  obs.first_step = true;
  return obs;
}

StepRecord& Session::RecordStep(const Decision& decision,
                                const Observation& obs,
                                const PlaybackResult& playback) {
  StepRecord record;
  record.step = static_cast<int>(trajectory_.steps.size());
  if (const auto* d = std::get_if<DownloadDecision>(&decision)) {
    record.is_download = true;
    record.slot = d->slot;
    record.level = d->level;
  } else {
    record.sleep_ms = std::get<SleepDecision>(decision).duration_ms;
  }
  record.delay_ms = obs.delay_ms;
  record.rebuf_ms = obs.rebuf_ms;
  record.played_ms = playback.played_ms;
  record.video_size_bits = obs.video_size_bits;
  record.play_video_id = obs.play_video_id;
  record.end_of_video = obs.end_of_video;
  record.buffers_ms.reserve(obs.players.size());
  for (const PlayerSnapshot& p : obs.players) {
    record.buffers_ms.push_back(p.buffer_ms);
  }
  record.rebuf_video_id = playback.stall_video;
  trajectory_.steps.push_back(std::move(record));
  return trajectory_.steps.back();
}

Observation Session::Step(const Decision& decision) {
  if (ended_) {
    throw Error(ErrorCode::kSessionEnded, "session already ended");
  }
  if (const auto* download = std::get_if<DownloadDecision>(&decision)) {
    if (download->slot < 0 || download->slot >= window_end() - head_) {
      throw Error(ErrorCode::kSlotOutOfWindow,
                  "slot " + std::to_string(download->slot) +
                      " is outside the current window");
    }
    if (download->level < 0 || download->level >= kLevelCount) {
      throw Error(ErrorCode::kInvalidLevel,
                  "level " + std::to_string(download->level) +
                      " is not on the ladder");
    }
    const int v = head_ + download->slot;
    const VideoAsset& video = *sequence_[static_cast<size_t>(v)];
    PlayerState& target = players_[static_cast<size_t>(v)];
    if (target.downloaded_chunks >= video.chunk_count()) {
      throw Error(ErrorCode::kVideoFullyDownloaded,
                  "video " + std::to_string(v) + " is fully downloaded");
    }
    const int chunk = target.downloaded_chunks;
    const int64_t bits = video.ChunkBits(chunk, download->level);
    const int64_t delay = network_->DownloadTimeMs(clock_ms_, bits);

    const PlaybackResult playback = AdvancePlayback(delay);

    // The chunk always completes; it only lands in a buffer if its video is
    // still in the window.
    ++target.downloaded_chunks;
    if (v >= head_) target.downloaded_ms += video.ChunkDurationMs(chunk);
    clock_ms_ += delay;

    Observation obs = MakeObservation(delay, playback.rebuf_ms, bits,
                                      chunk + 1 == video.chunk_count());
    StepRecord& record = RecordStep(decision, obs, playback);
    record.video_id = v;
    record.chunk = chunk;
    record.rebuf_video_id = v;
    return obs;
  }

  const int64_t sleep_ms = std::get<SleepDecision>(decision).duration_ms;
  if (sleep_ms <= 0) {
    throw Error(ErrorCode::kZeroSleep, "sleep duration must be > 0");
  }
  const PlaybackResult playback = AdvancePlayback(sleep_ms);
  clock_ms_ += sleep_ms;
  Observation obs = MakeObservation(sleep_ms, playback.rebuf_ms, 0, false);
  RecordStep(decision, obs, playback);
  return obs;
}

SessionKnowledge Session::RevealKnowledge() const {
  return {sequence_, watch_ms_, network_, clock_ms_};
}

}  // namespace svsim
