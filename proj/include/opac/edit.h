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
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "opac/abstraction.h"
#include "opac/model.h"
#include "opac/partition.h"

namespace opac {

/// (from, actual, output, to): when `actual` happens at `from`, the
/// intruder is shown `output` and the automaton may move to `to`.
struct EditEdge {
  int from;
  int actual;
  int output;
  int to;

  auto operator<=>(const EditEdge&) const = default;
};

/// Edit automaton derived from a pruned belief abstraction. Every edge
/// emits exactly one symbol.
struct EditAutomaton {
  std::vector<std::string> states;
  /// Partition cell of each state.
  std::vector<int> cells;
  std::vector<std::string> alphabet;
  int initial = -1;
  /// Sorted.
  std::vector<EditEdge> edges;

  int num_states() const { return static_cast<int>(states.size()); }
  int state_of_cell(int cell_id) const;
  /// Sorted, duplicate-free outputs available at `state` for `actual`.
  std::vector<int> outputs(int state, int actual) const;
};

/// (q, s, o, q') for every q' in delta(q, o) and every symbol s. The `bad`
/// sink is dropped.
EditAutomaton build_edit_automaton(const BeliefAbstraction& pruned);

enum class EditStrategy {
  /// Lowest-index available output.
  kLexFirst,
  /// The actual action when it is available, else lex-first.
  kMatchIfSafe,
  /// Uniform over available outputs, seeded.
  kUniformRandom,
};

std::string_view to_string(EditStrategy s);
/// Accepts "lex-first", "match-if-safe", "uniform-random".
EditStrategy parse_edit_strategy(std::string_view name);

class EditError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runtime edit function. Tracks the intruder's belief, which only ever
/// moves under the emitted outputs, and the cell that belief lies in.
///
/// Holds references to the automaton, the (canonical) model and the
/// partition; they must outlive the engine. Copying an engine forks it,
/// random state included.
class EditEngine {
 public:
  EditEngine(const EditAutomaton& automaton, const Mdp& m, const Partition& p,
             EditStrategy strategy = EditStrategy::kLexFirst, std::uint64_t seed = 0);

  /// Picks the output for `actual` without changing the engine state.
  /// Throws EditError when the current cell offers no output.
  int choose(int actual);
  /// Advances the observer belief under `output` and relocates the cell.
  void observe(int output);
  /// choose + observe.
  int step(int actual);

  const Eigen::VectorXd& observer_belief() const { return belief_; }
  int current_cell() const { return cell_; }
  /// Automaton state of the current cell, -1 if the cell has none.
  int current_state() const { return state_; }
  EditStrategy strategy() const { return strategy_; }

 private:
  const EditAutomaton* automaton_;
  const Mdp* model_;
  const Partition* partition_;
  EditStrategy strategy_;
  std::mt19937_64 rng_;
  Eigen::VectorXd belief_;
  int cell_ = -1;
  int state_ = -1;
};

struct EditCounterexample {
  EditStrategy strategy;
  /// 1: output defined, 2: output word in L(T_M), 3: belief under threshold.
  int requirement;
  std::vector<int> actual_word;
  std::vector<int> output_word;
  std::string message;
};

struct EditReport {
  bool ok = true;
  long long sequences_checked = 0;
  long long steps_checked = 0;
  std::optional<EditCounterexample> counterexample;
};

/// Runs every actual-action sequence of length `depth` (all prefixes
/// included) through a fresh engine per strategy and checks the three edit
/// requirements at each step. Stops at the first counterexample.
EditReport verify_edit_requirements(const EditAutomaton& automaton, const Mdp& m,
                                    const Partition& p, int depth,
                                    const std::vector<EditStrategy>& strategies =
                                        {EditStrategy::kLexFirst, EditStrategy::kMatchIfSafe,
                                         EditStrategy::kUniformRandom},
                                    std::uint64_t seed = 0);

std::string format_report(const EditReport& report, const Mdp& m);

}  // namespace opac
