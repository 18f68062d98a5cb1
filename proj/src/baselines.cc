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

#include "svsim/algorithm.h"
#include "svsim/errors.h"

namespace svsim {

namespace {

constexpr int64_t kIdleSleepMs = 500;

int LevelFor(const BandwidthEstimator& estimator,
             const std::array<double, kLevelCount>& ladder, double safety) {
  // Cold start: lowest rung until the first throughput sample.
  if (!estimator.has_estimate()) return 0;
  return RateMatchedLevel(ladder, estimator.EstimateMbps() * safety);
}

EstimatorKind ParseEstimatorKind(const std::string& name) {
  if (name == "harmonic") return EstimatorKind::kHarmonic;
  if (name == "moving_average") return EstimatorKind::kMovingAverage;
  throw Error(ErrorCode::kConfigError,
              "estimator must be 'harmonic' or 'moving_average', got '" +
                  name + "'");
}

}  // namespace

// --- no_prefetch ------------------------------------------------------------

NoPrefetchAlgorithm::NoPrefetchAlgorithm(const AlgorithmParams& params)
    : window_(static_cast<int>(ParamInt(params, "estimator_window", 5))),
      idle_sleep_ms_(ParamInt(params, "idle_sleep_ms", kIdleSleepMs)),
      estimator_(EstimatorKind::kHarmonic, window_) {
  if (idle_sleep_ms_ <= 0) {
    throw Error(ErrorCode::kConfigError, "idle_sleep_ms must be > 0");
  }
}

void NoPrefetchAlgorithm::Initialize(const AlgorithmContext& context) {
  Algorithm::Initialize(context);
  estimator_ = BandwidthEstimator(EstimatorKind::kHarmonic, window_);
}

Decision NoPrefetchAlgorithm::Decide(const Observation& observation) {
  estimator_.Observe(observation);
  for (size_t s = 0; s < observation.players.size(); ++s) {
    const PlayerSnapshot& p = observation.players[s];
    if (!p.fully_downloaded()) {
      return DownloadDecision{static_cast<int>(s),
                              LevelFor(estimator_, p.ladder_kbps, 1.0)};
    }
  }
  return SleepDecision{idle_sleep_ms_};
}

// --- fixed_prefetch ---------------------------------------------------------

FixedPrefetchAlgorithm::FixedPrefetchAlgorithm(const AlgorithmParams& params)
    : prefetch_chunks_(static_cast<int>(ParamInt(params, "prefetch_chunks", 2))),
      level_(static_cast<int>(ParamInt(params, "level", 1))),
      target_buffer_ms_(ParamInt(params, "target_buffer_ms", 4000)),
      idle_sleep_ms_(ParamInt(params, "idle_sleep_ms", kIdleSleepMs)) {
  if (prefetch_chunks_ < 0 || level_ < 0 || level_ >= kLevelCount ||
      target_buffer_ms_ < 0 || idle_sleep_ms_ <= 0) {
    throw Error(ErrorCode::kConfigError,
                "fixed_prefetch needs prefetch_chunks >= 0, level in [0, 2], "
                "target_buffer_ms >= 0 and idle_sleep_ms > 0");
  }
}

Decision FixedPrefetchAlgorithm::Decide(const Observation& observation) {
  const auto& players = observation.players;
  if (players.empty()) return SleepDecision{idle_sleep_ms_};
  const PlayerSnapshot& current = players.front();
  if (!current.fully_downloaded() && current.buffer_ms < target_buffer_ms_) {
    return DownloadDecision{0, level_};
  }
  int best = -1;
  for (size_t s = 1; s < players.size(); ++s) {
    const PlayerSnapshot& p = players[s];
    const int cap = std::min(prefetch_chunks_, p.chunk_count);
    if (p.downloaded_chunks >= cap) continue;
    if (best < 0 ||
        p.downloaded_chunks <
            players[static_cast<size_t>(best)].downloaded_chunks) {
      best = static_cast<int>(s);
    }
  }
  if (best >= 0) return DownloadDecision{best, level_};
  int64_t sleep = idle_sleep_ms_;
  if (!current.fully_downloaded() && current.buffer_ms > target_buffer_ms_) {
    sleep = std::min(sleep, current.buffer_ms - target_buffer_ms_);
  }
  return SleepDecision{std::max<int64_t>(sleep, 1)};
}

// --- threshold --------------------------------------------------------------

ThresholdConfig ThresholdConfigFromParams(const AlgorithmParams& params) {
  ThresholdConfig config;
  config.low_buffer_ms = ParamInt(params, "low_buffer_ms", config.low_buffer_ms);
  config.high_buffer_ms =
      ParamInt(params, "high_buffer_ms", config.high_buffer_ms);
  config.estimator =
      ParseEstimatorKind(ParamString(params, "estimator", "harmonic"));
  config.estimator_window = static_cast<int>(
      ParamInt(params, "estimator_window", config.estimator_window));
  config.safety_factor =
      ParamDouble(params, "safety_factor", config.safety_factor);
  config.max_sleep_ms = ParamInt(params, "max_sleep_ms", config.max_sleep_ms);
  return config;
}

ThresholdAlgorithm::ThresholdAlgorithm(const ThresholdConfig& config)
    : config_(config),
      estimator_(config.estimator, config.estimator_window) {
  if (config_.low_buffer_ms < 0 ||
      config_.high_buffer_ms < config_.low_buffer_ms ||
      !(config_.safety_factor > 0.0) || config_.max_sleep_ms <= 0) {
    throw Error(ErrorCode::kConfigError,
                "threshold needs 0 <= low <= high, safety_factor > 0 and "
                "max_sleep_ms > 0");
  }
}

void ThresholdAlgorithm::Initialize(const AlgorithmContext& context) {
  Algorithm::Initialize(context);
  estimator_ = BandwidthEstimator(config_.estimator, config_.estimator_window);
}

double ThresholdAlgorithm::NextChunkPlayProbability(
    std::span<const PlayerSnapshot> players, int slot) {
  auto survival = [](const PlayerSnapshot& p, int64_t t_ms) {
    return p.retention ? p.retention->SurvivalAtMs(t_ms) : 1.0;
  };
  // P(watch >= t | already watched p.played_ms).
  auto conditional = [&](const PlayerSnapshot& p, int64_t t_ms) {
    const double base = survival(p, p.played_ms);
    return base > 0.0 ? std::min(1.0, survival(p, t_ms) / base) : 0.0;
  };
  const PlayerSnapshot& target = players[static_cast<size_t>(slot)];
  const int64_t next_start =
      static_cast<int64_t>(target.downloaded_chunks) * target.chunk_duration_ms;
  if (slot == 0) return conditional(target, next_start);
  // Swipe-into probability of each predecessor, approximated by its
  // full-watch probability given where its play cursor stands.
  double probability = 1.0;
  for (int i = 0; i < slot; ++i) {
    const PlayerSnapshot& p = players[static_cast<size_t>(i)];
    probability *= conditional(p, p.duration_ms);
  }
  return probability * survival(target, next_start);
}

Decision ThresholdAlgorithm::Decide(const Observation& observation) {
  estimator_.Observe(observation);
  const auto& players = observation.players;
  if (players.empty()) return SleepDecision{config_.max_sleep_ms};

  const PlayerSnapshot& current = players.front();
  if (!current.fully_downloaded() &&
      current.buffer_ms < config_.low_buffer_ms) {
    return DownloadDecision{
        0, LevelFor(estimator_, current.ladder_kbps, config_.safety_factor)};
  }

  int best = -1;
  double best_probability = -1.0;
  for (size_t s = 0; s < players.size(); ++s) {
    const PlayerSnapshot& p = players[s];
    if (p.fully_downloaded() || p.buffer_ms >= config_.high_buffer_ms) continue;
    const double probability =
        NextChunkPlayProbability(players, static_cast<int>(s));
    if (probability > best_probability) {
      best_probability = probability;
      best = static_cast<int>(s);
    }
  }
  if (best >= 0) {
    const PlayerSnapshot& p = players[static_cast<size_t>(best)];
    return DownloadDecision{
        best, LevelFor(estimator_, p.ladder_kbps, config_.safety_factor)};
  }

  int64_t sleep = config_.max_sleep_ms;
  if (current.buffer_ms > config_.high_buffer_ms) {
    sleep = std::min(sleep, current.buffer_ms - config_.high_buffer_ms);
  }
  return SleepDecision{std::max<int64_t>(sleep, 1)};
}

// --- random -----------------------------------------------------------------

RandomAlgorithm::RandomAlgorithm(const AlgorithmParams& params)
    : sleep_probability_(ParamDouble(params, "sleep_probability", 0.2)),
      max_sleep_ms_(ParamInt(params, "max_sleep_ms", 2000)) {
  if (!(sleep_probability_ >= 0.0 && sleep_probability_ <= 1.0) ||
      max_sleep_ms_ < 1) {
    throw Error(ErrorCode::kConfigError,
                "random needs sleep_probability in [0, 1] and max_sleep_ms >= 1");
  }
}

void RandomAlgorithm::Initialize(const AlgorithmContext& context) {
  Algorithm::Initialize(context);
  rng_.seed(context.seed);
}

Decision RandomAlgorithm::Decide(const Observation& observation) {
  std::vector<int> open;
  for (size_t s = 0; s < observation.players.size(); ++s) {
    if (!observation.players[s].fully_downloaded()) {
      open.push_back(static_cast<int>(s));
    }
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (open.empty() || coin(rng_) < sleep_probability_) {
    std::uniform_int_distribution<int64_t> sleep(1, max_sleep_ms_);
    return SleepDecision{sleep(rng_)};
  }
  std::uniform_int_distribution<size_t> pick(0, open.size() - 1);
  std::uniform_int_distribution<int> level(0, kLevelCount - 1);
  const int slot = open[pick(rng_)];
  return DownloadDecision{slot, level(rng_)};
}

}  // namespace svsim
