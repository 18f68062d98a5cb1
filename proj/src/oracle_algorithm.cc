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


#include <algorithm>
#include <cmath>
#include <limits>

#include "svsim/algorithm.h"
#include "svsim/errors.h"

namespace svsim {

OracleAlgorithm::OracleAlgorithm(const AlgorithmParams& params)
    : alpha_(ParamDouble(params, "alpha", 1.0)),
      beta_(ParamDouble(params, "beta", 1.85)),
      gamma_(ParamDouble(params, "gamma", 1.0)),
      theta_(ParamDouble(params, "theta", 0.5)) {}

void OracleAlgorithm::SetKnowledge(SessionKnowledge knowledge) {
  knowledge_ = std::move(knowledge);
  planned_ = false;
}

int OracleAlgorithm::NeededChunks(int video_id) const {
  const VideoAsset& video = *knowledge_.sequence[static_cast<size_t>(video_id)];
  const int64_t watch =
      knowledge_.watch_durations_ms[static_cast<size_t>(video_id)];
  const int64_t chunks =
      (watch + video.chunk_duration_ms - 1) / video.chunk_duration_ms;
  return static_cast<int>(std::min<int64_t>(chunks, video.chunk_count()));
}

// Replays the engine for schedules that fetch needed chunks in playback
// order and sleep until the next swipe when the window holds nothing
// needed. Must stay in step with Session.
struct OracleAlgorithm::Model {
  const SessionKnowledge* k = nullptr;
  const std::vector<int>* needed = nullptr;
  int window = kMaxWindow;
  double alpha = 0, beta = 0, gamma = 0, theta = 0;

  int64_t clock_ms = 0;
  int head = 0;
  bool ended = false;
  std::vector<int64_t> played_ms, downloaded_ms;
  std::vector<int> downloaded_chunks, last_level;
  int64_t rebuf_ms = 0;
  double value = 0.0;  // everything but the rebuffering term

  int size() const { return static_cast<int>(k->sequence.size()); }
  int64_t watch(int v) const {
    return k->watch_durations_ms[static_cast<size_t>(v)];
  }

  void Swipe() {
    while (true) {
      ++head;
      if (head >= size()) {
        ended = true;
        return;
      }
      if (watch(head) != 0) return;
    }
  }

  void Play(int64_t wall_ms) {
    int64_t remaining = wall_ms;
    while (remaining > 0 && !ended) {
      const size_t v = static_cast<size_t>(head);
      const int64_t playable =
          std::min(downloaded_ms[v], watch(head)) - played_ms[v];
      const int64_t advance = std::min(playable, remaining);
      played_ms[v] += advance;
      remaining -= advance;
      if (played_ms[v] == watch(head)) {
        Swipe();
        continue;
      }
      rebuf_ms += remaining;
      remaining = 0;
    }
  }

  // Video of the next chunk to fetch, or -1 if the window is done.
  int Target() const {
    const int end = std::min(head + window, size());
    for (int v = head; v < end; ++v) {
      if (downloaded_chunks[static_cast<size_t>(v)] <
          (*needed)[static_cast<size_t>(v)]) {
        return v;
      }
    }
    return -1;
  }

  // Sleeps through swipes until a download is possible; returns its video.
  int Settle() {
    while (!ended) {
      const int v = Target();
      if (v >= 0) return v;
      const int64_t left = watch(head) - played_ms[static_cast<size_t>(head)];
      const int64_t sleep = std::max<int64_t>(left, 1);
      Play(sleep);
      clock_ms += sleep;
    }
    return -1;
  }

  void Download(int v, int level) {
    const VideoAsset& video = *k->sequence[static_cast<size_t>(v)];
    const size_t i = static_cast<size_t>(v);
    const int chunk = downloaded_chunks[i];
    const int64_t bits = video.ChunkBits(chunk, level);
    const int64_t delay = k->network->DownloadTimeMs(clock_ms, bits);
    Play(delay);
    ++downloaded_chunks[i];
    if (v >= head) downloaded_ms[i] += video.ChunkDurationMs(chunk);
    clock_ms += delay;
    const double mbps = video.ladder_kbps[static_cast<size_t>(level)] / 1000.0;
    value += alpha * mbps - theta * static_cast<double>(bits) / 1e6;
    if (last_level[i] >= 0) {
      value -= gamma * std::abs(mbps - video.ladder_kbps[static_cast<size_t>(
                                           last_level[i])] /
                                           1000.0);
    }
    last_level[i] = level;
  }

  // One-chunk lookahead: best utility given the exact download time and
  // the time left before playback reaches the chunk.
  int GreedyLevel(int v) const {
    const VideoAsset& video = *k->sequence[static_cast<size_t>(v)];
    const size_t i = static_cast<size_t>(v);
    int64_t slack_ms = downloaded_ms[i] - played_ms[i];
    for (int u = head; u < v; ++u) {
      slack_ms += watch(u) - played_ms[static_cast<size_t>(u)];
    }
    int best_level = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int q = kLevelCount - 1; q >= 0; --q) {
      const int64_t bits = video.ChunkBits(downloaded_chunks[i], q);
      const int64_t delay = k->network->DownloadTimeMs(clock_ms, bits);
      const int64_t stall = std::max<int64_t>(0, delay - slack_ms);
      const double mbps = video.ladder_kbps[static_cast<size_t>(q)] / 1000.0;
      double u = alpha * mbps - beta * static_cast<double>(stall) / 1000.0 -
                 theta * static_cast<double>(bits) / 1e6;
      if (last_level[i] >= 0) {
        u -= gamma *
             std::abs(mbps -
                      video.ladder_kbps[static_cast<size_t>(last_level[i])] /
                          1000.0);
      }
      if (u > best) {
        best = u;
        best_level = q;
      }
    }
    return best_level;
  }

  double Score() const {
    return value - beta * static_cast<double>(rebuf_ms) / 1000.0;
  }

  // Runs to the end with a fixed level, or greedy levels if level < 0.
  double Rollout(int level) {
    for (int v = Settle(); v >= 0; v = Settle()) {
      Download(v, level >= 0 ? level : GreedyLevel(v));
    }
    return Score();
  }
};

void OracleAlgorithm::Plan() {
  if (!knowledge_.network) {
    throw Error(ErrorCode::kAlgorithmError,
                "oracle used without session knowledge");
  }
  const int n = static_cast<int>(knowledge_.sequence.size());
  std::vector<int> needed(static_cast<size_t>(n));
  level_plan_.assign(static_cast<size_t>(n), {});
  for (int v = 0; v < n; ++v) {
    needed[static_cast<size_t>(v)] = NeededChunks(v);
    level_plan_[static_cast<size_t>(v)].assign(
        static_cast<size_t>(needed[static_cast<size_t>(v)]), 0);
  }

  Model state;
  state.k = &knowledge_;
  state.needed = &needed;
  state.window = context_.window_size;
  state.alpha = alpha_;
  state.beta = beta_;
  state.gamma = gamma_;
  state.theta = theta_;
  state.clock_ms = knowledge_.clock_ms;
  state.played_ms.assign(static_cast<size_t>(n), 0);
  state.downloaded_ms.assign(static_cast<size_t>(n), 0);
  state.downloaded_chunks.assign(static_cast<size_t>(n), 0);
  state.last_level.assign(static_cast<size_t>(n), -1);
  state.head = -1;
  state.Swipe();

  // Continuations: each fixed level, then per-chunk greedy.
  constexpr int kPolicies[] = {0, 1, 2, -1};
  for (int v = state.Settle(); v >= 0; v = state.Settle()) {
    int best_level = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int q = kLevelCount - 1; q >= 0; --q) {
      for (int policy : kPolicies) {
        Model trial = state;
        trial.Download(v, q);
        const double score = trial.Rollout(policy);
        if (score > best) {
          best = score;
          best_level = q;
        }
      }
    }
    const size_t i = static_cast<size_t>(v);
    level_plan_[i][static_cast<size_t>(state.downloaded_chunks[i])] =
        best_level;
    state.Download(v, best_level);
  }
  predicted_score_ = state.Score();
  planned_ = true;
}

double OracleAlgorithm::PredictedScore() {
  if (!planned_) Plan();
  return predicted_score_;
}

Decision OracleAlgorithm::Decide(const Observation& observation) {
  if (!planned_) Plan();
  const auto& players = observation.players;
  if (players.empty()) return SleepDecision{1};
  for (size_t s = 0; s < players.size(); ++s) {
    const PlayerSnapshot& p = players[s];
    const auto& plan = level_plan_[static_cast<size_t>(p.video_id)];
    if (p.downloaded_chunks < static_cast<int>(plan.size())) {
      return DownloadDecision{
          static_cast<int>(s),
          plan[static_cast<size_t>(p.downloaded_chunks)]};
    }
  }
  // Nothing useful to fetch until the playing video is swiped away.
  const PlayerSnapshot& current = players.front();
  const int64_t left =
      knowledge_.watch_durations_ms[static_cast<size_t>(current.video_id)] -
      current.played_ms;
  return SleepDecision{std::max<int64_t>(left, 1)};
}

// --- registry ---------------------------------------------------------------

AlgorithmRegistry::AlgorithmRegistry() {
  factories_["no_prefetch"] = [](const AlgorithmParams& params) {
    return std::make_unique<NoPrefetchAlgorithm>(params);
  };
  factories_["fixed_prefetch"] = [](const AlgorithmParams& params) {
    return std::make_unique<FixedPrefetchAlgorithm>(params);
  };
  factories_["threshold"] = [](const AlgorithmParams& params) {
    return std::make_unique<ThresholdAlgorithm>(
        ThresholdConfigFromParams(params));
  };
  factories_["oracle"] = [](const AlgorithmParams& params) {
    return std::make_unique<OracleAlgorithm>(params);
  };
  factories_["random"] = [](const AlgorithmParams& params) {
    return std::make_unique<RandomAlgorithm>(params);
  };
}

AlgorithmRegistry& AlgorithmRegistry::Global() {
  static AlgorithmRegistry* registry = new AlgorithmRegistry();
  return *registry;
}

void AlgorithmRegistry::Register(const std::string& name,
                                 AlgorithmFactory factory) {
  std::lock_guard<std::mutex> lock(mu_);
  factories_[name] = std::move(factory);
}

bool AlgorithmRegistry::Contains(const std::string& name) const {
  std::lock_guard<std::mutex> lock(mu_);
  return factories_.count(name) > 0;
}

std::unique_ptr<Algorithm> AlgorithmRegistry::Create(
    const std::string& name, const AlgorithmParams& params) const {
  AlgorithmFactory factory;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = factories_.find(name);
    if (it == factories_.end()) {
      throw Error(ErrorCode::kUnknownAlgorithm,
                  "no algorithm registered as '" + name + "'");
    }
    factory = it->second;
  }
  return factory(params);
}

std::vector<std::string> AlgorithmRegistry::Names() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::string> names;
  for (const auto& [name, factory] : factories_) names.push_back(name);
  return names;
}

}  // namespace svsim
