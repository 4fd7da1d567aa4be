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

#include <string>
#include <vector>

#include "opac/abstraction.h"
#include "opac/edit.h"
#include "opac/model.h"
#include "opac/oracle_sim.h"
#include "opac/partition.h"
#include "opac/synthesis.h"

// Text renderings of the pipeline's artifacts. All writers are pure and
// deterministic; numbers use the shortest round-trip representation.

namespace opac {

/// id,lo1..lon,hi1..hin,status
std::string cells_csv(const Partition& p);

/// Graphviz digraph. The first action is drawn solid, the second dashed,
/// any further ones dotted; `bad` is a double circle.
std::string abstraction_dot(const BeliefAbstraction& t, const std::string& name = "T");

/// src,action,dst
std::string edges_csv(const BeliefAbstraction& t);

/// 2-D partition plot: grid, simplex boundary, threshold line, shaded bad
/// cells, safe-cell labels and the initial belief. `m` canonical, N = 3.
std::string partition_svg(const Partition& p, const Mdp& m);

/// state,allowed,vacuous,removed with allowed actions joined by ';'.
std::string allowed_csv(const RestrictedMdp& r);

/// state,action,value
std::string policy_csv(const Policy& policy, const Mdp& m);

/// Edges labelled "actual/output".
std::string edit_dot(const EditAutomaton& ea);

/// step,real,output,b(<state>)...,secret_mass,cell
std::string trace_csv(const std::vector<TraceRecord>& trace, const Mdp& m);

}  // namespace opac
