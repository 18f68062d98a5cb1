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


#ifndef SVSIM_NETWORK_TRACE_H_
#define SVSIM_NETWORK_TRACE_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace svsim {

struct ThroughputPoint {
  double timestamp_s = 0.0;
  double mbps = 0.0;

  bool operator==(const ThroughputPoint&) const = default;
};

// Piecewise-constant throughput signal. Each point's rate holds from its
// timestamp until the next one; the last point holds for the same span as
// the interval before it, after which the trace repeats from t = 0.
//
// Timestamps are quantized to whole milliseconds and rates to whole bits per
// second so that transfer arithmetic is exact integer math.
class NetworkTrace {
 public:
  // Throws Error on any invariant violation (see ParseNetworkTrace).
  NetworkTrace(std::string id, std::vector<ThroughputPoint> points);

  const std::string& id() const { return id_; }
  std::span<const ThroughputPoint> points() const { return points_; }

  // Length of one loop of the trace.
  int64_t period_ms() const { return period_ms_; }

  // Time-weighted mean throughput over one period.
  double MeanMbps() const;

  // Smallest whole number of milliseconds t such that the bits delivered
  // over [start_ms, start_ms + t) reach `size_bits`. Requires size_bits > 0
  // and start_ms >= 0.
  int64_t DownloadTimeMs(int64_t start_ms, int64_t size_bits) const;

  NetworkTrace WithId(std::string id) const;

 private:
  int SegmentAt(int64_t phase_ms) const;
  int64_t CumulativeMillibits(int64_t phase_ms) const;

  std::string id_;
  std::vector<ThroughputPoint> points_;
  std::vector<int64_t> start_ms_;
  std::vector<int64_t> rate_bps_;
  // Bits x 1000 delivered from phase 0 up to each segment start.
  std::vector<int64_t> cumulative_millibits_;
  int64_t period_ms_ = 0;
  int64_t period_millibits_ = 0;
};

// One record per line: "<seconds> <mbps>", any whitespace. Blank lines are
// skipped. Timestamps are shifted so the first record sits at t = 0.
NetworkTrace ParseNetworkTrace(std::string_view text, std::string id);

std::string SerializeNetworkTrace(const NetworkTrace& trace);

enum class TraceCategory { kLow, kMedium, kHigh };

const char* TraceCategoryName(TraceCategory category);

struct CategoryThresholds {
  double low_cut_mbps = 1.5;
  double high_cut_mbps = 3.0;
};

// Public synthetic traces use (1.5, 3); evaluation traces use (1.9, 3).
inline constexpr CategoryThresholds kPublicThresholds{1.5, 3.0};
inline constexpr CategoryThresholds kEvaluationThresholds{1.9, 3.0};

// Low if mean < low_cut, High if mean >= high_cut, else Medium.
TraceCategory Classify(const NetworkTrace& trace,
                       const CategoryThresholds& thresholds);

// Parses "a,b" into thresholds.
CategoryThresholds ParseThresholds(std::string_view text);

// Hidden-state bandwidth process: a state's mean is uniform in
// [min_bw, max_bw], its length geometric with the given mean, and each
// one-second sample is the state mean plus clamped Gaussian noise.
struct SyntheticTraceParams {
  double min_bw_mbps = 0.2;
  double max_bw_mbps = 4.3;
  double mean_state_duration_s = 5.0;
  double noise_std_mbps = 0.3;
  int length_s = 300;
  uint64_t seed = 0;
};

NetworkTrace GenerateSyntheticTrace(const SyntheticTraceParams& params,
                                    std::string id);

}  // namespace svsim

#endif  // SVSIM_NETWORK_TRACE_H_
