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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "opac/abstraction.h"
#include "opac/belief.h"
#include "opac/edit.h"
#include "opac/model.h"
#include "opac/partition.h"
#include "opac/synthesis.h"

namespace opac {

struct TraceRecord {
  int step = 0;
  /// Action the system performed; empty for the initial record.
  std::optional<int> real_action;
  /// Action the intruder saw (equal to real_action without editing); -1 at step 0.
  int output_action = -1;
  Eigen::VectorXd belief;
  double secret_mass = 0.0;
  std::optional<int> cell;
};

/// Yields the action for a step. Sources are stateful and deterministic.
using ActionSource = std::function<int(int step)>;

/// Repeats `actions` cyclically.
ActionSource fixed_actions(std::vector<int> actions);
/// Uniform over all actions.
ActionSource random_actions(int num_actions, std::uint64_t seed);
/// Samples the hidden state from pi0 and the transition kernel and plays
/// the policy's choice at the current state.
ActionSource policy_actions(const Mdp& m, const Policy& policy, std::uint64_t seed);

/// Records b_0 = pi0 followed by `steps` belief updates. When `p` is given
/// each record carries the cell of its reduced belief (`m` canonical).
std::vector<TraceRecord> simulate(const Mdp& m, ActionSource actions, int steps,
                                  const Partition* p = nullptr);

/// Like simulate, but every real action passes through the edit engine and
/// the recorded belief is the intruder's belief under the outputs.
std::vector<TraceRecord> simulate_edited(const Mdp& m, EditEngine engine, ActionSource actions,
                                         int steps);

/// First step whose secret mass is strictly above lambda.
std::optional<int> opacity_monitor(const std::vector<TraceRecord>& trace, double lambda);

struct SoundnessReport {
  long long sequences_checked = 0;
  bool exhaustive = false;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks that the cells visited by exact belief trajectories form paths of
/// `raw`. Enumerates all sequences of length `depth` when
/// |A|^depth <= 10^4, otherwise draws `samples` random sequences. A
/// trajectory that enters a bad cell must be matched by an edge to `bad`
/// and is not followed further.
SoundnessReport soundness_check(const Mdp& m, const Partition& p, const BeliefAbstraction& raw,
                                int depth, int samples, std::uint64_t seed = 0);

struct RestrictedOpacityReport {
  long long sequences_checked = 0;
  std::optional<std::string> violation;
  bool ok() const { return !violation; }
};

/// Enumerates every action word of length <= depth that the restricted MDP
/// can play (each action allowed at some state the system may occupy) and
/// checks the intruder's exact belief against the threshold after each
/// action. `r.base` must be the model the intruder reasons with.
RestrictedOpacityReport verify_restricted_opacity(const RestrictedMdp& r, int depth);

/// Componentwise min/max of F over a fixed Halton point set of box ∩ X plus
/// the box corners lying in X. Throws std::invalid_argument if no sample
/// falls in X.
Box brute_reach_box(const AffineDecomposition<double>& d, const Box& box, int samples);

}  // namespace opac
