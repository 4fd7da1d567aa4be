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
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace opac {

/// Nondeterministic finite automaton without accepting states.
///
/// States and symbols are dense indices; names are kept alongside for export.
/// Successor lists are kept sorted and duplicate-free, so two automata with
/// the same transition relation compare equal with operator==.
class Nfa {
 public:
  Nfa() = default;
  Nfa(std::vector<std::string> states, std::vector<std::string> alphabet);

  int num_states() const { return static_cast<int>(states_.size()); }
  int num_symbols() const { return static_cast<int>(alphabet_.size()); }
  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<int>& initial() const { return initial_; }

  /// Throws std::out_of_range for unknown names.
  int state_index(std::string_view name) const;
  int symbol_index(std::string_view name) const;

  void add_initial(int q);
  void add_transition(int from, int symbol, int to);
  /// Drops every successor of (q, symbol), i.e. disables the symbol at q.
  void clear_transitions(int q, int symbol);
  void remove_transition(int from, int symbol, int to);

  const std::vector<int>& successors(int q, int symbol) const {
    return delta_.at(q).at(symbol);
  }
  bool enabled(int q, int symbol) const { return !successors(q, symbol).empty(); }
  std::vector<int> enabled_symbols(int q) const;
  bool has_transition(int from, int symbol, int to) const;
  int num_transitions() const;

  /// True when the word (given as symbol indices) can be read from some
  /// initial state, i.e. it belongs to the generated language.
  bool accepts(std::span<const int> word) const;

  /// Post-image of a state set under one symbol. Result is sorted.
  std::vector<int> post(std::span<const int> from, int symbol) const;

  bool operator==(const Nfa&) const = default;

 private:
  std::vector<std::string> states_;
  std::vector<std::string> alphabet_;
  std::vector<std::vector<std::vector<int>>> delta_;
  std::vector<int> initial_;
};

}  // namespace opac
