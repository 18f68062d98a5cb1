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


#ifndef SVSIM_RUNNER_H_
#define SVSIM_RUNNER_H_

#include <cstdint>

#include "svsim/algorithm.h"
#include "svsim/scoring.h"
#include "svsim/session.h"

namespace svsim {

inline constexpr int64_t kDefaultMaxSteps = 1'000'000;

struct RunOptions {
  int64_t max_steps = kDefaultMaxSteps;
  QoeCoefficients coefficients;
};

struct RunResult {
  Trajectory trajectory;
  QoeBreakdown qoe;
  WasteReport waste;
};

// Drives observation -> decision -> step until the session ends. The
// algorithm must already be initialized. Exceptions raised by the algorithm
// and invalid decisions surface as Error(kAlgorithmError); exceeding
// max_steps raises Error(kNonTerminating).
RunResult RunSession(Session& session, Algorithm& algorithm,
                     const RunOptions& options = {});

}  // namespace svsim

#endif  // SVSIM_RUNNER_H_
