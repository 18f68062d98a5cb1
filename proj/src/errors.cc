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


#include "svsim/errors.h"

namespace svsim {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLine:
      return "malformed_line";
    case ErrorCode::kNonMonotonicTimestamp:
      return "non_monotonic_timestamp";
    case ErrorCode::kNonPositiveThroughput:
      return "non_positive_throughput";
    case ErrorCode::kEmptyTrace:
      return "empty_trace";
    case ErrorCode::kTooFewPoints:
      return "too_few_points";
    case ErrorCode::kUnequalChunkCounts:
      return "unequal_chunk_counts";
    case ErrorCode::kNonPositiveSize:
      return "non_positive_size";
    case ErrorCode::kMissingEndMark:
      return "missing_end_mark";
    case ErrorCode::kIncreasingFraction:
      return "increasing_fraction";
    case ErrorCode::kNonConsecutiveSeconds:
      return "non_consecutive_seconds";
    case ErrorCode::kBadFirstEntry:
      return "bad_first_entry";
    case ErrorCode::kInvalidParams:
      return "invalid_params";
    case ErrorCode::kEmptySampleSet:
      return "empty_sample_set";
    case ErrorCode::kEmptySequence:
      return "empty_sequence";
    case ErrorCode::kDurationMismatch:
      return "duration_mismatch";
    case ErrorCode::kSlotOutOfWindow:
      return "slot_out_of_window";
    case ErrorCode::kInvalidLevel:
      return "invalid_level";
    case ErrorCode::kVideoFullyDownloaded:
      return "video_fully_downloaded";
    case ErrorCode::kSessionEnded:
      return "session_ended";
    case ErrorCode::kZeroSleep:
      return "zero_sleep";
    case ErrorCode::kAlgorithmError:
      return "algorithm_error";
    case ErrorCode::kNonTerminating:
      return "non_terminating";
    case ErrorCode::kIncompleteTrajectory:
      return "incomplete_trajectory";
    case ErrorCode::kNoSamples:
      return "no_samples";
    case ErrorCode::kUnknownAlgorithm:
      return "unknown_algorithm";
    case ErrorCode::kEmptyInput:
      return "empty_input";
    case ErrorCode::kMissingBaseline:
      return "missing_baseline";
    case ErrorCode::kConfigError:
      return "config_error";
    case ErrorCode::kIoError:
      return "io_error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message, int line)
    : std::runtime_error(message), code_(code), line_(line) {}

}  // namespace svsim
