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


#include "svsim/runner.h"

#include <string>

#include "svsim/errors.h"

namespace svsim {

RunResult RunSession(Session& session, Algorithm& algorithm,
                     const RunOptions& options) {
  if (auto* informed = dynamic_cast<FullKnowledgeAlgorithm*>(&algorithm)) {
    informed->SetKnowledge(session.RevealKnowledge());
  }
  Observation observation = session.InitialObservation();
  int64_t steps = 0;
  while (!session.ended()) {
    if (steps >= options.max_steps) {
      throw Error(ErrorCode::kNonTerminating,
                  algorithm.name() + " did not finish within " +
                      std::to_string(options.max_steps) + " steps");
    }
    Decision decision;
    try {
      decision = algorithm.Decide(observation);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kAlgorithmError,
                  algorithm.name() + " failed: " + e.what());
    }
    try {
      observation = session.Step(decision);
    } catch (const Error& e) {
      throw Error(ErrorCode::kAlgorithmError,
                  algorithm.name() + " made an invalid decision: " + e.what());
    }
    ++steps;
  }
  RunResult result;
  result.trajectory = session.trajectory();
  result.qoe = ScoreSession(result.trajectory, options.coefficients);
  result.waste = ComputeWaste(result.trajectory);
  return result;
}

}  // namespace svsim
