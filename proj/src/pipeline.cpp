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

#include "opac/pipeline.h"

#include "opac/belief.h"

namespace opac {

AbstractionResult run_abstraction(const Mdp& canonical, std::span<const double> widths,
                                  const AbstractionOptions& options, int refine_depth) {
  AbstractionResult result;
  result.partition =
      refine_initial(build_grid(widths, canonical), reduce(canonical.pi0), canonical, refine_depth);
  result.raw = build_abstraction(canonical, result.partition, options);
  PruneResult pr = prune(result.raw);
  result.pruned = std::move(pr.pruned);
  result.log = std::move(pr.log);
  return result;
}

}  // namespace opac
