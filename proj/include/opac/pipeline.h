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

#include <span>
#include <vector>

#include "opac/abstraction.h"
#include "opac/model.h"
#include "opac/partition.h"

namespace opac {

/// Everything the belief abstraction stage produces.
struct AbstractionResult {
  Partition partition;
  BeliefAbstraction raw;
  BeliefAbstraction pruned;
  std::vector<PruneEvent> log;

  int initial_cell() const { return raw.initial_cell(); }
};

/// Grid, initial-cell refinement, abstraction and pruning for a canonically
/// ordered model. Lets RefinementError, AbstractionError and
/// InitialStatePrunedError propagate.
AbstractionResult run_abstraction(const Mdp& canonical, std::span<const double> widths,
                                  const AbstractionOptions& options = {}, int refine_depth = 8);

}  // namespace opac
