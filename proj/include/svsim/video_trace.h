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


#ifndef SVSIM_VIDEO_TRACE_H_
#define SVSIM_VIDEO_TRACE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace svsim {

inline constexpr int kLevelCount = 3;
inline constexpr std::array<double, kLevelCount> kDefaultLadderKbps = {
    750.0, 1200.0, 1850.0};
inline constexpr int64_t kDefaultChunkDurationMs = 1000;

struct RetentionPoint {
  int second = 0;
  double fraction = 0.0;

  bool operator==(const RetentionPoint&) const = default;
};

// Fraction of viewers still watching at each whole second. The first entry
// is (0, 1), fractions never increase, and the final entry is a zero end
// mark. A curve for an L-second video usually ends with (L + 1, 0).
class RetentionCurve {
 public:
  explicit RetentionCurve(std::vector<RetentionPoint> entries);

  std::span<const RetentionPoint> entries() const { return entries_; }
  int end_second() const { return entries_.back().second; }

  // fraction(second); 0 past the end mark.
  double FractionAt(int second) const;

  // Survival probability at an arbitrary instant, interpolating linearly
  // inside each second (the same model the watch-time sampler uses).
  double SurvivalAtMs(int64_t t_ms) const;

  // Video length implied by the end mark: (end_second - 1) seconds.
  int64_t ImpliedDurationMs() const;

  bool operator==(const RetentionCurve&) const = default;

 private:
  std::vector<RetentionPoint> entries_;
};

RetentionCurve ParseRetentionTrace(std::string_view text);
std::string SerializeRetentionCurve(const RetentionCurve& curve);

struct VideoAsset {
  std::string name;
  int64_t chunk_duration_ms = kDefaultChunkDurationMs;
  // Total playable length; the last chunk may be shorter than the others.
  int64_t duration_ms = 0;
  // sizes_bytes[chunk][level]
  std::vector<std::array<int64_t, kLevelCount>> sizes_bytes;
  std::array<double, kLevelCount> ladder_kbps = kDefaultLadderKbps;
  std::shared_ptr<const RetentionCurve> retention;

  int chunk_count() const { return static_cast<int>(sizes_bytes.size()); }
  int64_t ChunkDurationMs(int chunk) const;
  int64_t ChunkBits(int chunk, int level) const {
    return sizes_bytes[static_cast<size_t>(chunk)][static_cast<size_t>(level)] *
           8;
  }
};

// One stream per ladder level, ordered low to high, one byte count per line.
// The duration defaults to chunk_count * chunk_duration_ms.
VideoAsset ParseVideoTrace(std::span<const std::string_view> level_files,
                           std::string name, RetentionCurve retention);

struct VideoSequence {
  std::string id;
  std::vector<std::shared_ptr<const VideoAsset>> videos;
};

// JSON manifest:
//   {"sequence": "id", "videos": [{"name": "tj", "duration_ms": 17000,
//     "retention": "tj_retention.txt", "bitrates_kbps": [750, 1200, 1850],
//     "sizes": ["tj_750.txt", "tj_1200.txt", "tj_1850.txt"]}, ...]}
// "sizes" defaults to <name>_<bitrate>.txt; "duration_ms", "bitrates_kbps"
// and "chunk_duration_ms" are optional. Paths are relative to the manifest.
VideoSequence LoadManifest(const std::filesystem::path& path);

std::string ReadFileOrThrow(const std::filesystem::path& path);

}  // namespace svsim

#endif  // SVSIM_VIDEO_TRACE_H_
