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


#ifndef SVSIM_RETENTION_H_
#define SVSIM_RETENTION_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "svsim/video_trace.h"

namespace svsim {

using Rng = std::mt19937_64;

// Draws one viewer's watch time for a video. The curve is read as
// P(watch >= s seconds) = fraction(s); the departure instant is spread
// uniformly inside the departure second, and the result is clamped to
// [0, video_duration_ms]. Viewers who reach the last listed second before
// the end mark therefore watch the whole video.
int64_t SampleWatchDuration(const RetentionCurve& curve,
                            int64_t video_duration_ms, Rng& rng);

// Same mapping for a caller-supplied uniform u in [0, 1).
int64_t WatchDurationForQuantile(const RetentionCurve& curve,
                                 int64_t video_duration_ms, double u);

// Entry s is the fraction of samples with duration >= s * 1000 ms. The
// curve stops at the first zero, which becomes the end mark.
RetentionCurve EmpiricalRetention(std::span<const int64_t> samples_ms,
                                  int64_t video_duration_ms);

// Largest |empirical(s) - curve(s)| over the seconds of `curve`; missing
// empirical entries count as 0.
double MaxRetentionDeviation(const RetentionCurve& empirical,
                             const RetentionCurve& curve);

struct DeviationStats {
  std::vector<double> per_repeat;
  double median = 0.0;
  double p90 = 0.0;
};

// For each repeat: draw n_samples watch times, rebuild the curve and record
// its max deviation from the true curve.
DeviationStats SamplingDeviation(const RetentionCurve& curve,
                                 int64_t video_duration_ms, int n_samples,
                                 int repeats, Rng& rng);

// Uses the duration implied by the curve's end mark.
DeviationStats SamplingDeviation(const RetentionCurve& curve, int n_samples,
                                 int repeats, Rng& rng);

}  // namespace svsim

#endif  // SVSIM_RETENTION_H_
