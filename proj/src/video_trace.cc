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


#include "svsim/video_trace.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "svsim/errors.h"
#include "text_util.h"

namespace svsim {

RetentionCurve::RetentionCurve(std::vector<RetentionPoint> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw Error(ErrorCode::kMissingEndMark, "retention curve is empty");
  }
  if (entries_.front().second != 0 || entries_.front().fraction != 1.0) {
    throw Error(ErrorCode::kBadFirstEntry,
                "retention curve must start with (0, 1)", 1);
  }
  for (size_t i = 0; i < entries_.size(); ++i) {
    const RetentionPoint& e = entries_[i];
    const int line = static_cast<int>(i) + 1;
    if (!(e.fraction >= 0.0 && e.fraction <= 1.0)) {
      throw Error(ErrorCode::kMalformedLine,
                  "retention fraction outside [0, 1]", line);
    }
    if (i == 0) continue;
    if (e.second != entries_[i - 1].second + 1) {
      throw Error(ErrorCode::kNonConsecutiveSeconds,
                  "retention seconds must be consecutive", line);
    }
    if (e.fraction > entries_[i - 1].fraction) {
      throw Error(ErrorCode::kIncreasingFraction,
                  "retention fraction increases", line);
    }
  }
  if (entries_.size() < 2 || entries_.back().fraction != 0.0) {
    throw Error(ErrorCode::kMissingEndMark,
                "retention curve must end with a zero-fraction end mark");
  }
}

double RetentionCurve::FractionAt(int second) const {
  if (second < 0) return 1.0;
  if (second >= static_cast<int>(entries_.size())) return 0.0;
  return entries_[static_cast<size_t>(second)].fraction;
}

double RetentionCurve::SurvivalAtMs(int64_t t_ms) const {
  if (t_ms <= 0) return 1.0;
  const int second = static_cast<int>(t_ms / 1000);
  const double frac = static_cast<double>(t_ms % 1000) / 1000.0;
  const double here = FractionAt(second);
  const double next = FractionAt(second + 1);
  return here - (here - next) * frac;
}

int64_t RetentionCurve::ImpliedDurationMs() const {
  return static_cast<int64_t>(end_second() - 1) * 1000;
}

RetentionCurve ParseRetentionTrace(std::string_view text) {
  std::vector<RetentionPoint> entries;
  for (const internal::TextRecord& rec : internal::SplitRecords(text)) {
    if (rec.fields.size() != 2) {
      throw Error(ErrorCode::kMalformedLine,
                  "expected '<second> <fraction>' on line " +
                      std::to_string(rec.line),
                  rec.line);
    }
    auto second = internal::ParseNumber<int>(rec.fields[0]);
    auto fraction = internal::ParseNumber<double>(rec.fields[1]);
    if (!second) {
      // Accept "3.0" style integral seconds.
      auto as_double = internal::ParseNumber<double>(rec.fields[0]);
      if (as_double && *as_double == std::floor(*as_double) &&
          std::abs(*as_double) < 1e9) {
        second = static_cast<int>(*as_double);
      }
    }
    if (!second || !fraction) {
      throw Error(ErrorCode::kMalformedLine,
                  "unparseable retention record on line " +
                      std::to_string(rec.line),
                  rec.line);
    }
    const size_t i = entries.size();
    if (i == 0 && (*second != 0 || *fraction != 1.0)) {
      throw Error(ErrorCode::kBadFirstEntry,
                  "retention curve must start with (0, 1)", rec.line);
    }
    if (i > 0 && *second != entries.back().second + 1) {
      throw Error(ErrorCode::kNonConsecutiveSeconds,
                  "retention seconds must be consecutive on line " +
                      std::to_string(rec.line),
                  rec.line);
    }
    if (!(*fraction >= 0.0 && *fraction <= 1.0)) {
      throw Error(ErrorCode::kMalformedLine,
                  "retention fraction outside [0, 1] on line " +
                      std::to_string(rec.line),
                  rec.line);
    }
    if (i > 0 && *fraction > entries.back().fraction) {
      throw Error(ErrorCode::kIncreasingFraction,
                  "retention fraction increases on line " +
                      std::to_string(rec.line),
                  rec.line);
    }
    entries.push_back({*second, *fraction});
  }
  return RetentionCurve(std::move(entries));
}

std::string SerializeRetentionCurve(const RetentionCurve& curve) {
  std::string out;
  for (const RetentionPoint& e : curve.entries()) {
    out += std::to_string(e.second);
    out += ' ';
    out += internal::FormatDouble(e.fraction);
    out += '\n';
  }
  return out;
}

int64_t VideoAsset::ChunkDurationMs(int chunk) const {
  if (chunk + 1 < chunk_count()) return chunk_duration_ms;
  return duration_ms - static_cast<int64_t>(chunk) * chunk_duration_ms;
}

VideoAsset ParseVideoTrace(std::span<const std::string_view> level_files,
                           std::string name, RetentionCurve retention) {
  if (level_files.size() != kLevelCount) {
    throw Error(ErrorCode::kInvalidParams,
                "video '" + name + "' needs exactly " +
                    std::to_string(kLevelCount) + " size streams");
  }
  VideoAsset video;
  video.name = std::move(name);
  std::vector<std::vector<int64_t>> columns;
  for (std::string_view file : level_files) {
    std::vector<int64_t> sizes;
    for (const internal::TextRecord& rec : internal::SplitRecords(file)) {
      std::optional<int64_t> size;
      if (rec.fields.size() == 1) {
        size = internal::ParseNumber<int64_t>(rec.fields[0]);
      }
      if (!size) {
        throw Error(ErrorCode::kMalformedLine,
                    "expected one integer byte count on line " +
                        std::to_string(rec.line),
                    rec.line);
      }
      if (*size <= 0) {
        throw Error(ErrorCode::kNonPositiveSize,
                    "chunk size must be > 0 on line " +
                        std::to_string(rec.line),
                    rec.line);
      }
      sizes.push_back(*size);
    }
    columns.push_back(std::move(sizes));
  }
  for (const auto& column : columns) {
    if (column.size() != columns.front().size()) {
      throw Error(ErrorCode::kUnequalChunkCounts,
                  "video '" + video.name +
                      "' has different chunk counts per level");
    }
  }
  if (columns.front().empty()) {
    throw Error(ErrorCode::kEmptyTrace,
                "video '" + video.name + "' has no chunks");
  }
  video.sizes_bytes.resize(columns.front().size());
  for (size_t c = 0; c < video.sizes_bytes.size(); ++c) {
    for (int q = 0; q < kLevelCount; ++q) {
      video.sizes_bytes[c][static_cast<size_t>(q)] =
          columns[static_cast<size_t>(q)][c];
    }
  }
  video.duration_ms =
      static_cast<int64_t>(video.chunk_count()) * video.chunk_duration_ms;
  video.retention = std::make_shared<const RetentionCurve>(std::move(retention));
  return video;
}

std::string ReadFileOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

std::string BitrateLabel(double kbps) {
  if (kbps == std::floor(kbps)) {
    return std::to_string(static_cast<int64_t>(kbps));
  }
  return internal::FormatDouble(kbps);
}

}  // namespace

VideoSequence LoadManifest(const std::filesystem::path& path) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(ReadFileOrThrow(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError,
                "manifest " + path.string() + ": " + e.what());
  }
  const std::filesystem::path base = path.parent_path();
  VideoSequence sequence;
  try {
    sequence.id = doc.value("sequence", path.stem().string());
    const json& videos = doc.at("videos");
    if (!videos.is_array() || videos.empty()) {
      throw Error(ErrorCode::kEmptySequence,
                  "manifest " + path.string() + " lists no videos");
    }
    for (const json& entry : videos) {
      const std::string name = entry.at("name").get<std::string>();
      std::array<double, kLevelCount> ladder = kDefaultLadderKbps;
      if (entry.contains("bitrates_kbps")) {
        auto values = entry.at("bitrates_kbps").get<std::vector<double>>();
        if (values.size() != kLevelCount) {
          throw Error(ErrorCode::kConfigError,
                      "video '" + name + "' needs 3 bitrates");
        }
        std::copy(values.begin(), values.end(), ladder.begin());
      }
      std::vector<std::string> size_files;
      if (entry.contains("sizes")) {
        size_files = entry.at("sizes").get<std::vector<std::string>>();
      } else {
        for (double kbps : ladder) {
          size_files.push_back(name + "_" + BitrateLabel(kbps) + ".txt");
        }
      }
      std::vector<std::string> contents;
      for (const std::string& f : size_files) {
        contents.push_back(ReadFileOrThrow(base / f));
      }
      std::vector<std::string_view> views(contents.begin(), contents.end());
      RetentionCurve curve = ParseRetentionTrace(ReadFileOrThrow(
          base / entry.at("retention").get<std::string>()));
      VideoAsset video = ParseVideoTrace(views, name, std::move(curve));
      video.ladder_kbps = ladder;
      video.chunk_duration_ms =
          entry.value("chunk_duration_ms", kDefaultChunkDurationMs);
      if (video.chunk_duration_ms <= 0) {
        throw Error(ErrorCode::kConfigError,
                    "video '" + name + "' has a non-positive chunk duration");
      }
      const int64_t full =
          static_cast<int64_t>(video.chunk_count()) * video.chunk_duration_ms;
      video.duration_ms = entry.value("duration_ms", full);
      if (video.duration_ms > full ||
          video.duration_ms <= full - video.chunk_duration_ms) {
        throw Error(ErrorCode::kConfigError,
                    "video '" + name +
                        "' duration does not match its chunk count");
      }
      sequence.videos.push_back(
          std::make_shared<const VideoAsset>(std::move(video)));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError,
                "manifest " + path.string() + ": " + e.what());
  }
  return sequence;
}

}  // namespace svsim
