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

#include <stdexcept>
#include <string>
#include <vector>

#include "opac/model.h"
#include "opac/nfa.h"
#include "opac/partition.h"

namespace opac {

/// strict: interiors must intersect (by more than kGeomTol in every
/// dimension); in a dimension where either box is flat the closed test is
/// used instead, so degenerate reach boxes still find their cells.
/// closed: closed boxes intersect (within kGeomTol).
enum class OverlapMode { kStrict, kClosed };

bool boxes_overlap(const Box& a, const Box& b, OverlapMode mode);

/// Name of the absorbing sink state.
inline constexpr const char* kBadStateName = "bad";

/// NFA over safe partition cells plus a `bad` sink.
///
/// State q of `nfa` stands for partition cell `cells[q]`; the sink has
/// cells[bad_state] == -1. Safe cell `id` is named "q<id>".
struct BeliefAbstraction {
  Nfa nfa;
  std::vector<int> cells;
  int bad_state = -1;
  int initial_state = -1;

  int initial_cell() const { return cells.at(initial_state); }
  /// NFA state of a partition cell, or -1 when the cell has no state.
  int state_of_cell(int cell_id) const;
};

struct AbstractionOptions {
  OverlapMode overlap = OverlapMode::kStrict;
  /// Clamp reach boxes to [0,1] per coordinate before overlap tests.
  bool clip = false;
};

class AbstractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// q -> q' on action a iff reach_box(q, a) overlaps cell q'; q -> bad iff it
/// overlaps any bad cell. Excluded cells generate nothing. The initial state
/// is the cell holding reduce(pi0). `m` must be canonically ordered and the
/// partition built for it. Throws AbstractionError when pi0 sits in a bad cell.
BeliefAbstraction build_abstraction(const Mdp& m, const Partition& p,
                                    const AbstractionOptions& options = {});

struct PruneEvent {
  enum class Kind { kActionDisabled, kStateDeleted };
  Kind kind;
  int state;   // state index in the unpruned automaton
  int action;  // -1 for kStateDeleted
  std::string reason;
};

std::string describe(const PruneEvent& e, const BeliefAbstraction& t);

class InitialStatePrunedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PruneOrder { kAscending, kDescending };

struct PruneResult {
  /// Surviving safe states plus the isolated `bad` sink.
  BeliefAbstraction pruned;
  std::vector<PruneEvent> log;
};

/// Disables every action that may lead to `bad` or to a deleted state, and
/// deletes states left with no enabled action, until nothing changes.
/// Throws InitialStatePrunedError if the initial state is deleted.
PruneResult prune(const BeliefAbstraction& t, PruneOrder order = PruneOrder::kAscending);

}  // namespace opac
