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


#include "svsim/trajectory.h"

#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"
#include "svsim/errors.h"

namespace svsim {

using nlohmann::ordered_json;

void WriteTrajectoryJsonl(const Trajectory& trajectory, std::ostream& out) {
  ordered_json header;
  header["kind"] = "session";
  header["completed"] = trajectory.completed;
  ordered_json videos = ordered_json::array();
  for (const VideoRecord& v : trajectory.videos) {
    ordered_json j;
    j["video_id"] = v.video_id;
    j["name"] = v.name;
    j["chunk_count"] = v.chunk_count;
    j["chunk_duration_ms"] = v.chunk_duration_ms;
    j["duration_ms"] = v.duration_ms;
    j["ladder_kbps"] = v.ladder_kbps;
    j["watch_duration_ms"] = v.watch_duration_ms;
    j["played_ms"] = v.played_ms;
    j["started"] = v.started;
    videos.push_back(std::move(j));
  }
  header["videos"] = std::move(videos);
  out << header.dump() << '\n';

  for (const StepRecord& s : trajectory.steps) {
    ordered_json j;
    j["kind"] = "step";
    j["step"] = s.step;
    ordered_json decision;
    if (s.is_download) {
      decision["type"] = "download";
      decision["slot"] = s.slot;
      decision["level"] = s.level;
    } else {
      decision["type"] = "sleep";
      decision["duration_ms"] = s.sleep_ms;
    }
    j["decision"] = std::move(decision);
    j["delay_ms"] = s.delay_ms;
    j["rebuf_ms"] = s.rebuf_ms;
    j["played_ms"] = s.played_ms;
    j["video_size_bits"] = s.video_size_bits;
    j["play_video_id"] = s.play_video_id;
    j["end_of_video"] = s.end_of_video;
    j["buffers_ms"] = s.buffers_ms;
    if (s.is_download) {
      j["video_id"] = s.video_id;
      j["chunk"] = s.chunk;
    }
    j["rebuf_video_id"] = s.rebuf_video_id;
    out << j.dump() << '\n';
  }
}

Trajectory ReadTrajectoryJsonl(std::istream& in) {
  Trajectory trajectory;
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const ordered_json j = ordered_json::parse(line);
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "session") {
        saw_header = true;
        trajectory.completed = j.at("completed").get<bool>();
        for (const auto& v : j.at("videos")) {
          VideoRecord r;
          r.video_id = v.at("video_id").get<int>();
          r.name = v.at("name").get<std::string>();
          r.chunk_count = v.at("chunk_count").get<int>();
          r.chunk_duration_ms = v.at("chunk_duration_ms").get<int64_t>();
          r.duration_ms = v.at("duration_ms").get<int64_t>();
          r.ladder_kbps =
              v.at("ladder_kbps").get<std::array<double, kLevelCount>>();
          r.watch_duration_ms = v.at("watch_duration_ms").get<int64_t>();
          r.played_ms = v.at("played_ms").get<int64_t>();
          r.started = v.at("started").get<bool>();
          trajectory.videos.push_back(std::move(r));
        }
      } else if (kind == "step") {
        StepRecord s;
        s.step = j.at("step").get<int>();
        const auto& d = j.at("decision");
        s.is_download = d.at("type").get<std::string>() == "download";
        if (s.is_download) {
          s.slot = d.at("slot").get<int>();
          s.level = d.at("level").get<int>();
          s.video_id = j.at("video_id").get<int>();
          s.chunk = j.at("chunk").get<int>();
        } else {
          s.sleep_ms = d.at("duration_ms").get<int64_t>();
        }
        s.delay_ms = j.at("delay_ms").get<int64_t>();
        s.rebuf_ms = j.at("rebuf_ms").get<int64_t>();
        s.played_ms = j.at("played_ms").get<int64_t>();
        s.video_size_bits = j.at("video_size_bits").get<int64_t>();
        s.play_video_id = j.at("play_video_id").get<int>();
        s.end_of_video = j.at("end_of_video").get<bool>();
        s.buffers_ms = j.at("buffers_ms").get<std::vector<int64_t>>();
        s.rebuf_video_id = j.at("rebuf_video_id").get<int>();
        trajectory.steps.push_back(std::move(s));
      } else {
        throw Error(ErrorCode::kMalformedLine,
                    "unknown record kind '" + kind + "'", line_no);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedLine,
                std::string("bad trajectory record: ") + e.what(), line_no);
  }
  if (!saw_header) {
    throw Error(ErrorCode::kIncompleteTrajectory,
                "trajectory has no session header");
  }
  return trajectory;
}

}  // namespace svsim
