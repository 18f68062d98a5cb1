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
#include "text_util.h"

namespace svsim {

namespace {

std::span<const ThroughputSample> LastWindow(
    std::span<const ThroughputSample> history, int window) {
  if (history.empty()) {
    throw Error(ErrorCode::kNoSamples, "no throughput samples yet");
  }
  if (window < 1) {
    throw Error(ErrorCode::kInvalidParams, "estimator window must be >= 1");
  }
  const size_t w = std::min(history.size(), static_cast<size_t>(window));
  return history.last(w);
}

}  // namespace

double HarmonicEstimate(std::span<const ThroughputSample> history,
                        int window) {
  const auto recent = LastWindow(history, window);
  double inverse_sum = 0.0;
  for (const ThroughputSample& s : recent) inverse_sum += 1.0 / s.Mbps();
  return static_cast<double>(recent.size()) / inverse_sum;
}

double MovingAverageEstimate(std::span<const ThroughputSample> history,
                             int window) {
  const auto recent = LastWindow(history, window);
  double sum = 0.0;
  for (const ThroughputSample& s : recent) sum += s.Mbps();
  return sum / static_cast<double>(recent.size());
}

BandwidthEstimator::BandwidthEstimator(EstimatorKind kind, int window)
    : kind_(kind), window_(window) {
  if (window_ < 1) {
    throw Error(ErrorCode::kInvalidParams, "estimator window must be >= 1");
  }
}

void BandwidthEstimator::Observe(const Observation& observation) {
  if (observation.video_size_bits > 0 && observation.delay_ms > 0) {
    Add({observation.video_size_bits, observation.delay_ms});
  }
}

void BandwidthEstimator::Add(ThroughputSample sample) {
  if (sample.size_bits <= 0 || sample.delay_ms <= 0) {
    throw Error(ErrorCode::kInvalidParams,
                "throughput samples need size > 0 and delay > 0");
  }
  history_.push_back(sample);
  while (history_.size() > static_cast<size_t>(window_)) history_.pop_front();
}

double BandwidthEstimator::EstimateMbps() const {
  const std::vector<ThroughputSample> samples(history_.begin(),
                                              history_.end());
  return kind_ == EstimatorKind::kHarmonic
             ? HarmonicEstimate(samples, window_)
             : MovingAverageEstimate(samples, window_);
}

int RateMatchedLevel(const std::array<double, kLevelCount>& ladder_kbps,
                     double budget_mbps) {
  int level = 0;
  for (int q = 0; q < kLevelCount; ++q) {
    if (ladder_kbps[static_cast<size_t>(q)] / 1000.0 <= budget_mbps) level = q;
  }
  return level;
}

double ParamDouble(const AlgorithmParams& params, const std::string& key,
                   double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  auto value = internal::ParseNumber<double>(it->second);
  if (!value) {
    throw Error(ErrorCode::kConfigError,
                "parameter '" + key + "' is not a number: " + it->second);
  }
  return *value;
}

int64_t ParamInt(const AlgorithmParams& params, const std::string& key,
                 int64_t fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  auto value = internal::ParseNumber<int64_t>(it->second);
  if (!value) {
    throw Error(ErrorCode::kConfigError,
                "parameter '" + key + "' is not an integer: " + it->second);
  }
  return *value;
}

std::string ParamString(const AlgorithmParams& params, const std::string& key,
                        const std::string& fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

}  // namespace svsim
