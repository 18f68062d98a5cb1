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


#ifndef SVSIM_ERRORS_H_
#define SVSIM_ERRORS_H_

#include <stdexcept>
#include <string>

namespace svsim {

enum class ErrorCode {
  // Trace ingestion.
  kMalformedLine,
  kNonMonotonicTimestamp,
  kNonPositiveThroughput,
  kEmptyTrace,
  kTooFewPoints,
  kUnequalChunkCounts,
  kNonPositiveSize,
  kMissingEndMark,
  kIncreasingFraction,
  kNonConsecutiveSeconds,
  kBadFirstEntry,
  kInvalidParams,
  // Retention sampling.
  kEmptySampleSet,
  // Engine.
  kEmptySequence,
  kDurationMismatch,
  kSlotOutOfWindow,
  kInvalidLevel,
  kVideoFullyDownloaded,
  kSessionEnded,
  kZeroSleep,
  kAlgorithmError,
  kNonTerminating,
  // Scoring.
  kIncompleteTrajectory,
  // Algorithms.
  kNoSamples,
  kUnknownAlgorithm,
  // Harness / CLI.
  kEmptyInput,
  kMissingBaseline,
  kConfigError,
  kIoError,
};

// Stable snake_case name used in machine-readable diagnostics.
const char* ErrorCodeName(ErrorCode code);

// The single exception type thrown by the library. `line()` is the 1-based
// input line for parse errors and 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, int line = 0);

  ErrorCode code() const { return code_; }
  int line() const { return line_; }

 private:
  ErrorCode code_;
  int line_;
};

}  // namespace svsim

#endif  // SVSIM_ERRORS_H_
