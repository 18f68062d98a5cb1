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


#ifndef SVSIM_ALGORITHM_H_
#define SVSIM_ALGORITHM_H_

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "svsim/session.h"
#include "svsim/video_trace.h"

namespace svsim {

using AlgorithmParams = std::map<std::string, std::string>;

struct AlgorithmContext {
  int window_size = kMaxWindow;
  std::array<double, kLevelCount> ladder_kbps = kDefaultLadderKbps;
  uint64_t seed = 0;
};

// A prefetching policy. One instance drives one session; Decide must return
// a decision that is valid for the window in `observation`.
class Algorithm {
 public:
  virtual ~Algorithm() = default;

  virtual std::string name() const = 0;
  virtual void Initialize(const AlgorithmContext& context) { context_ = context; }
  virtual Decision Decide(const Observation& observation) = 0;

 protected:
  AlgorithmContext context_;
};

// Reference policies that are told the hidden ground truth before the first
// decision. Never use one as a contestant.
class FullKnowledgeAlgorithm : public Algorithm {
 public:
  virtual void SetKnowledge(SessionKnowledge knowledge) = 0;
};

// Per-chunk throughput sample as seen by the client.
struct ThroughputSample {
  int64_t size_bits = 0;
  int64_t delay_ms = 0;

  double Mbps() const {
    return static_cast<double>(size_bits) / static_cast<double>(delay_ms) /
           1000.0;
  }
};

// W / sum(1 / r_i) over the last W = min(window, samples) rates.
double HarmonicEstimate(std::span<const ThroughputSample> history, int window);

// Arithmetic mean of the last W rates.
double MovingAverageEstimate(std::span<const ThroughputSample> history,
                             int window);

enum class EstimatorKind { kHarmonic, kMovingAverage };

class BandwidthEstimator {
 public:
  BandwidthEstimator(EstimatorKind kind, int window);

  // Ignores sleeps and other zero-size observations.
  void Observe(const Observation& observation);
  void Add(ThroughputSample sample);

  bool has_estimate() const { return !history_.empty(); }
  // Throws Error(kNoSamples) before the first download.
  double EstimateMbps() const;

 private:
  EstimatorKind kind_;
  int window_;
  std::deque<ThroughputSample> history_;
};

// Highest level whose nominal bitrate fits within the given budget, or level
// 0 if none does.
int RateMatchedLevel(const std::array<double, kLevelCount>& ladder_kbps,
                     double budget_mbps);

// Helpers for reading string parameters. Throw Error(kConfigError) on
// unparseable values.
double ParamDouble(const AlgorithmParams& params, const std::string& key,
                   double fallback);
int64_t ParamInt(const AlgorithmParams& params, const std::string& key,
                 int64_t fallback);
std::string ParamString(const AlgorithmParams& params, const std::string& key,
                        const std::string& fallback);

// Downloads the earliest not-fully-downloaded window video, in slot order,
// at the harmonic-rate-matched level; sleeps 500 ms once all are complete.
class NoPrefetchAlgorithm : public Algorithm {
 public:
  explicit NoPrefetchAlgorithm(const AlgorithmParams& params = {});

  std::string name() const override { return "no_prefetch"; }
  void Initialize(const AlgorithmContext& context) override;
  Decision Decide(const Observation& observation) override;

 private:
  int window_;
  int64_t idle_sleep_ms_;
  BandwidthEstimator estimator_;
};

// Keeps the playing video `target_buffer_ms` ahead, then fills slots 1..4
// round-robin up to `prefetch_chunks` chunks each, all at one fixed level.
class FixedPrefetchAlgorithm : public Algorithm {
 public:
  explicit FixedPrefetchAlgorithm(const AlgorithmParams& params = {});

  std::string name() const override { return "fixed_prefetch"; }
  Decision Decide(const Observation& observation) override;

  int prefetch_chunks() const { return prefetch_chunks_; }
  int level() const { return level_; }

 private:
  int prefetch_chunks_;
  int level_;
  int64_t target_buffer_ms_;
  int64_t idle_sleep_ms_;
};

struct ThresholdConfig {
  int64_t low_buffer_ms = 1000;
  int64_t high_buffer_ms = 4000;
  EstimatorKind estimator = EstimatorKind::kHarmonic;
  int estimator_window = 5;
  double safety_factor = 0.9;
  int64_t max_sleep_ms = 500;
};

ThresholdConfig ThresholdConfigFromParams(const AlgorithmParams& params);

// Buffer-threshold heuristic driven by a bandwidth estimate and the exposed
// retention curves.
class ThresholdAlgorithm : public Algorithm {
 public:
  explicit ThresholdAlgorithm(const ThresholdConfig& config = {});

  std::string name() const override { return "threshold"; }
  void Initialize(const AlgorithmContext& context) override;
  Decision Decide(const Observation& observation) override;

  // Estimated probability that the next chunk of `slot` gets played.
  static double NextChunkPlayProbability(
      std::span<const PlayerSnapshot> players, int slot);

 private:
  ThresholdConfig config_;
  BandwidthEstimator estimator_;
};

// Knows every watch time and the future bandwidth. Fetches exactly the
// chunks that will be played, in playback order, back to back. Levels are
// planned before the first decision by rollout over an exact replica of the
// engine: each chunk takes the level whose best continuation (fixed level
// or per-chunk greedy) scores highest, so the plan is never worse than any
// of those continuations run from the start.
class OracleAlgorithm : public FullKnowledgeAlgorithm {
 public:
  explicit OracleAlgorithm(const AlgorithmParams& params = {});

  std::string name() const override { return "oracle"; }
  void SetKnowledge(SessionKnowledge knowledge) override;
  Decision Decide(const Observation& observation) override;

  // Session score the plan is expected to reach; plans on first use.
  double PredictedScore();

 private:
  struct Model;

  int NeededChunks(int video_id) const;
  void Plan();

  SessionKnowledge knowledge_;
  bool planned_ = false;
  // level_plan_[video][chunk] for every chunk the viewer will play.
  std::vector<std::vector<int>> level_plan_;
  double predicted_score_ = 0.0;
  double alpha_, beta_, gamma_, theta_;
};

// Uniformly random valid decisions; used for fuzzing the engine.
class RandomAlgorithm : public Algorithm {
 public:
  explicit RandomAlgorithm(const AlgorithmParams& params = {});

  std::string name() const override { return "random"; }
  void Initialize(const AlgorithmContext& context) override;
  Decision Decide(const Observation& observation) override;

 private:
  double sleep_probability_;
  int64_t max_sleep_ms_;
  std::mt19937_64 rng_;
};

using AlgorithmFactory =
    std::function<std::unique_ptr<Algorithm>(const AlgorithmParams&)>;

// Name -> factory table behind `--algo`. Third-party policies call Register
// before evaluation starts; built-ins are present from the start.
class AlgorithmRegistry {
 public:
  static AlgorithmRegistry& Global();

  void Register(const std::string& name, AlgorithmFactory factory);
  bool Contains(const std::string& name) const;
  std::unique_ptr<Algorithm> Create(const std::string& name,
                                    const AlgorithmParams& params = {}) const;
  std::vector<std::string> Names() const;

 private:
  AlgorithmRegistry();

  mutable std::mutex mu_;
  std::map<std::string, AlgorithmFactory> factories_;
};

}  // namespace svsim

#endif  // SVSIM_ALGORITHM_H_
