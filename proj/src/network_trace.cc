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


#include "svsim/network_trace.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "svsim/errors.h"
#include "text_util.h"

namespace svsim {

NetworkTrace::NetworkTrace(std::string id, std::vector<ThroughputPoint> points)
    : id_(std::move(id)), points_(std::move(points)) {
  if (points_.empty()) {
    throw Error(ErrorCode::kEmptyTrace, "network trace '" + id_ + "' is empty");
  }
  if (points_.size() < 2) {
    throw Error(ErrorCode::kTooFewPoints,
                "network trace '" + id_ + "' needs at least 2 points");
  }
  if (points_.front().timestamp_s != 0.0) {
    throw Error(ErrorCode::kNonMonotonicTimestamp,
                "network trace '" + id_ + "' must start at t = 0", 1);
  }
  start_ms_.reserve(points_.size());
  rate_bps_.reserve(points_.size());
  for (size_t i = 0; i < points_.size(); ++i) {
    const ThroughputPoint& p = points_[i];
    const int line = static_cast<int>(i) + 1;
    if (!std::isfinite(p.mbps) || p.mbps <= 0.0) {
      throw Error(ErrorCode::kNonPositiveThroughput,
                  "throughput must be finite and > 0", line);
    }
    if (!std::isfinite(p.timestamp_s)) {
      throw Error(ErrorCode::kNonMonotonicTimestamp,
                  "timestamp must be finite", line);
    }
    const int64_t t_ms = std::llround(p.timestamp_s * 1000.0);
    if (!start_ms_.empty() && t_ms <= start_ms_.back()) {
      throw Error(ErrorCode::kNonMonotonicTimestamp,
                  "timestamps must be strictly increasing (at ms resolution)",
                  line);
    }
    const int64_t bps = std::llround(p.mbps * 1e6);
    if (bps <= 0) {
      throw Error(ErrorCode::kNonPositiveThroughput,
                  "throughput rounds to 0 bps", line);
    }
    start_ms_.push_back(t_ms);
    rate_bps_.push_back(bps);
  }
  const size_t n = start_ms_.size();
  period_ms_ = start_ms_[n - 1] + (start_ms_[n - 1] - start_ms_[n - 2]);

  cumulative_millibits_.resize(n);
  int64_t acc = 0;
  for (size_t i = 0; i < n; ++i) {
    cumulative_millibits_[i] = acc;
    const int64_t end = i + 1 < n ? start_ms_[i + 1] : period_ms_;
    acc += rate_bps_[i] * (end - start_ms_[i]);
  }
  period_millibits_ = acc;
}

double NetworkTrace::MeanMbps() const {
  double weighted = 0.0;
  for (size_t i = 0; i < points_.size(); ++i) {
    const int64_t end = i + 1 < points_.size() ? start_ms_[i + 1] : period_ms_;
    weighted += points_[i].mbps * static_cast<double>(end - start_ms_[i]);
  }
  return weighted / static_cast<double>(period_ms_);
}

int NetworkTrace::SegmentAt(int64_t phase_ms) const {
  auto it = std::upper_bound(start_ms_.begin(), start_ms_.end(), phase_ms);
  return static_cast<int>(it - start_ms_.begin()) - 1;
}

int64_t NetworkTrace::CumulativeMillibits(int64_t phase_ms) const {
  const int seg = SegmentAt(phase_ms);
  return cumulative_millibits_[seg] +
         rate_bps_[seg] * (phase_ms - start_ms_[seg]);
}

int64_t NetworkTrace::DownloadTimeMs(int64_t start_ms,
                                     int64_t size_bits) const {
  if (size_bits <= 0 || start_ms < 0) {
    throw Error(ErrorCode::kInvalidParams,
                "download_time needs size > 0 and start >= 0");
  }
  int64_t need = size_bits * 1000;
  const int64_t phase = start_ms % period_ms_;

  // Whole loops first; afterwards 0 < need <= period_millibits_.
  const int64_t loops = (need - 1) / period_millibits_;
  need -= loops * period_millibits_;

  int64_t target = CumulativeMillibits(phase) + need;
  int64_t offset_ms = 0;
  if (target > period_millibits_) {
    target -= period_millibits_;
    offset_ms = period_ms_;
  }
  // Last segment whose start cumulative is strictly below the target.
  auto it = std::lower_bound(cumulative_millibits_.begin(),
                             cumulative_millibits_.end(), target);
  const size_t seg = static_cast<size_t>(it - cumulative_millibits_.begin()) - 1;
  const int64_t remaining = target - cumulative_millibits_[seg];
  const int64_t within = (remaining + rate_bps_[seg] - 1) / rate_bps_[seg];
  const int64_t end_phase = start_ms_[seg] + within;
  return loops * period_ms_ + offset_ms + end_phase - phase;
}

NetworkTrace NetworkTrace::WithId(std::string id) const {
  NetworkTrace copy = *this;
  copy.id_ = std::move(id);
  return copy;
}

NetworkTrace ParseNetworkTrace(std::string_view text, std::string id) {
  std::vector<ThroughputPoint> points;
  double origin = 0.0;
  double last = 0.0;
  for (const internal::TextRecord& rec : internal::SplitRecords(text)) {
    if (rec.fields.size() != 2) {
      throw Error(ErrorCode::kMalformedLine,
                  "expected '<seconds> <mbps>' on line " +
                      std::to_string(rec.line),
                  rec.line);
    }
    auto t = internal::ParseNumber<double>(rec.fields[0]);
    auto bw = internal::ParseNumber<double>(rec.fields[1]);
    if (!t || !bw || !std::isfinite(*t) || std::isnan(*bw)) {
      throw Error(ErrorCode::kMalformedLine,
                  "unparseable number on line " + std::to_string(rec.line),
                  rec.line);
    }
    if (points.empty()) {
      origin = *t;
    } else if (!(*t > last)) {
      throw Error(ErrorCode::kNonMonotonicTimestamp,
                  "timestamp does not increase on line " +
                      std::to_string(rec.line),
                  rec.line);
    }
    if (!(*bw > 0.0) || !std::isfinite(*bw)) {
      throw Error(ErrorCode::kNonPositiveThroughput,
                  "throughput must be finite and > 0 on line " +
                      std::to_string(rec.line),
                  rec.line);
    }
    last = *t;
    points.push_back({*t - origin, *bw});
  }
  if (points.empty()) {
    throw Error(ErrorCode::kEmptyTrace, "network trace '" + id + "' is empty");
  }
  return NetworkTrace(std::move(id), std::move(points));
}

std::string SerializeNetworkTrace(const NetworkTrace& trace) {
  std::string out;
  for (const ThroughputPoint& p : trace.points()) {
    out += internal::FormatDouble(p.timestamp_s);
    out += ' ';
    out += internal::FormatDouble(p.mbps);
    out += '\n';
  }
  return out;
}

const char* TraceCategoryName(TraceCategory category) {
  switch (category) {
    case TraceCategory::kLow:
      return "Low";
    case TraceCategory::kMedium:
      return "Medium";
    case TraceCategory::kHigh:
      return "High";
  }
  return "?";
}

TraceCategory Classify(const NetworkTrace& trace,
                       const CategoryThresholds& thresholds) {
  if (!(thresholds.low_cut_mbps < thresholds.high_cut_mbps)) {
    throw Error(ErrorCode::kInvalidParams, "thresholds need low_cut < high_cut");
  }
  const double mean = trace.MeanMbps();
  if (mean < thresholds.low_cut_mbps) return TraceCategory::kLow;
  if (mean >= thresholds.high_cut_mbps) return TraceCategory::kHigh;
  return TraceCategory::kMedium;
}

CategoryThresholds ParseThresholds(std::string_view text) {
  const size_t comma = text.find(',');
  if (comma == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidParams,
                "thresholds must look like 'low,high'");
  }
  auto low = internal::ParseNumber<double>(text.substr(0, comma));
  auto high = internal::ParseNumber<double>(text.substr(comma + 1));
  if (!low || !high || !(*low < *high) || !(*low > 0.0)) {
    throw Error(ErrorCode::kInvalidParams,
                "thresholds must be two numbers with 0 < low < high");
  }
  return {*low, *high};
}

NetworkTrace GenerateSyntheticTrace(const SyntheticTraceParams& params,
                                    std::string id) {
  if (!(params.min_bw_mbps > 0.0) ||
      !(params.min_bw_mbps <= params.max_bw_mbps) ||
      !std::isfinite(params.max_bw_mbps) || params.length_s < 10 ||
      !(params.noise_std_mbps >= 0.0) ||
      !(params.mean_state_duration_s >= 1.0)) {
    throw Error(ErrorCode::kInvalidParams,
                "synthetic trace needs 0 < min_bw <= max_bw, length >= 10 s, "
                "noise_std >= 0 and mean state duration >= 1 s");
  }
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> state_mean(params.min_bw_mbps,
                                                    params.max_bw_mbps);
  std::geometric_distribution<int> extra_seconds(
      1.0 / params.mean_state_duration_s);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<ThroughputPoint> points;
  points.reserve(static_cast<size_t>(params.length_s));
  double mean = 0.0;
  int left_in_state = 0;
  for (int t = 0; t < params.length_s; ++t) {
    if (left_in_state == 0) {
      mean = params.min_bw_mbps == params.max_bw_mbps ? params.min_bw_mbps
                                                      : state_mean(rng);
      left_in_state = 1 + extra_seconds(rng);
    }
    --left_in_state;
    double value = mean + params.noise_std_mbps * noise(rng);
    value = std::round(value * 1e4) / 1e4;
    value = std::clamp(value, params.min_bw_mbps, params.max_bw_mbps);
    points.push_back({static_cast<double>(t), value});
  }
  return NetworkTrace(std::move(id), std::move(points));
}

}  // namespace svsim
