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


#include "svsim/retention.h"

#include <algorithm>
#include <cmath>

#include "svsim/errors.h"

namespace svsim {

int64_t WatchDurationForQuantile(const RetentionCurve& curve,
                                 int64_t video_duration_ms, double u) {
  if (video_duration_ms < 0) {
    throw Error(ErrorCode::kInvalidParams, "video duration must be >= 0");
  }
  const std::span<const RetentionPoint> e = curve.entries();
  const size_t last = e.size() - 1;
  // First second s whose successor has dropped below u.
  size_t s = 0;
  while (s + 1 < last && !(e[s + 1].fraction < u)) ++s;
  const double here = e[s].fraction;
  const double next = e[s + 1].fraction;
  double within = 1.0;
  if (next < u && here > next) within = (here - u) / (here - next);
  within = std::clamp(within, 0.0, 1.0);
  const int64_t ms = static_cast<int64_t>(s) * 1000 +
                     static_cast<int64_t>(std::floor(within * 1000.0));
  return std::clamp<int64_t>(ms, 0, video_duration_ms);
}

int64_t SampleWatchDuration(const RetentionCurve& curve,
                            int64_t video_duration_ms, Rng& rng) {
  const double u = std::generate_canonical<double, 64>(rng);
  return WatchDurationForQuantile(curve, video_duration_ms, u);
}

RetentionCurve EmpiricalRetention(std::span<const int64_t> samples_ms,
                                  int64_t video_duration_ms) {
  if (samples_ms.empty()) {
    throw Error(ErrorCode::kEmptySampleSet, "no watch-duration samples");
  }
  std::vector<int64_t> sorted(samples_ms.begin(), samples_ms.end());
  for (int64_t& v : sorted) v = std::clamp<int64_t>(v, 0, video_duration_ms);
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<RetentionPoint> entries{{0, 1.0}};
  for (int s = 1;; ++s) {
    auto first = std::lower_bound(sorted.begin(), sorted.end(),
                                  static_cast<int64_t>(s) * 1000);
    const double fraction =
        static_cast<double>(sorted.end() - first) / n;
    entries.push_back({s, fraction});
    if (fraction == 0.0) break;
  }
  return RetentionCurve(std::move(entries));
}

double MaxRetentionDeviation(const RetentionCurve& empirical,
                             const RetentionCurve& curve) {
  double worst = 0.0;
  for (const RetentionPoint& e : curve.entries()) {
    worst = std::max(worst,
                     std::abs(empirical.FractionAt(e.second) - e.fraction));
  }
  return worst;
}

DeviationStats SamplingDeviation(const RetentionCurve& curve,
                                 int64_t video_duration_ms, int n_samples,
                                 int repeats, Rng& rng) {
  if (n_samples < 1 || repeats < 1) {
    throw Error(ErrorCode::kInvalidParams,
                "sampling deviation needs n_samples >= 1 and repeats >= 1");
  }
  DeviationStats stats;
  std::vector<int64_t> samples(static_cast<size_t>(n_samples));
  for (int r = 0; r < repeats; ++r) {
    for (int64_t& d : samples) {
      d = SampleWatchDuration(curve, video_duration_ms, rng);
    }
    stats.per_repeat.push_back(MaxRetentionDeviation(
        EmpiricalRetention(samples, video_duration_ms), curve));
  }
  std::vector<double> sorted = stats.per_repeat;
  std::sort(sorted.begin(), sorted.end());
  const size_t n = sorted.size();
  stats.median = n % 2 == 1 ? sorted[n / 2]
                            : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  // Nearest-rank percentile.
  const size_t rank =
      static_cast<size_t>(std::ceil(0.9 * static_cast<double>(n)));
  stats.p90 = sorted[std::max<size_t>(rank, 1) - 1];
  return stats;
}

DeviationStats SamplingDeviation(const RetentionCurve& curve, int n_samples,
                                 int repeats, Rng& rng) {
  return SamplingDeviation(curve, std::max<int64_t>(0, curve.ImpliedDurationMs()),
                           n_samples, repeats, rng);
}

}  // namespace svsim
