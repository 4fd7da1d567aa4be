/*
 * Copyright (c) 2026, The opac authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "opac/abstraction.h"
#include "opac/edit.h"

namespace opac::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidModel = 1,
  kUsageOrIo = 2,
  kAbstractionFailed = 3,
  kBlockingPruned = 4,
  kOpacityViolated = 5,
  kVerificationFailed = 6,
};

struct RunConfig {
  std::string model_path;
  /// One width for every reduced dimension, or one per dimension.
  std::vector<double> widths{0.2};
  std::optional<double> lambda_override;
  OverlapMode overlap = OverlapMode::kStrict;
  bool clip = false;
  EditStrategy strategy = EditStrategy::kLexFirst;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int refine_depth = 8;
};

int cmd_validate(const RunConfig& config, std::ostream& log);
int cmd_abstract(const RunConfig& config, std::ostream& log);
/// mode is "direct" or "edit". `target` names MDP states.
int cmd_synthesize(const RunConfig& config, const std::string& mode,
                   const std::vector<std::string>& target, bool all_pairs, std::ostream& log);
/// action_spec: comma-separated action names (cycled), "random", or "policy"
/// (requires `target`).
int cmd_simulate(const RunConfig& config, int steps, const std::string& action_spec, bool edited,
                 const std::vector<std::string>& target, std::ostream& log);
int cmd_verify(const RunConfig& config, int depth, int samples, std::ostream& log);

/// Parses argv and dispatches to a subcommand. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace opac::cli
