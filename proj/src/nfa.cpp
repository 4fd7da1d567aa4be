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

#include "opac/nfa.h"

#include <algorithm>

namespace opac {

namespace {

void insert_sorted(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

int find_name(const std::vector<std::string>& names, std::string_view name,
              const char* what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    throw std::out_of_range(std::string("unknown ") + what + " '" +
                            std::string(name) + "'");
  }
  return static_cast<int>(it - names.begin());
}

}  // namespace

Nfa::Nfa(std::vector<std::string> states, std::vector<std::string> alphabet)
    : states_(std::move(states)),
      alphabet_(std::move(alphabet)),
      delta_(states_.size(), std::vector<std::vector<int>>(alphabet_.size())) {}

int Nfa::state_index(std::string_view name) const {
  return find_name(states_, name, "state");
}

int Nfa::symbol_index(std::string_view name) const {
  return find_name(alphabet_, name, "symbol");
}

void Nfa::add_initial(int q) {
  if (q < 0 || q >= num_states()) throw std::out_of_range("initial state out of range");
  insert_sorted(initial_, q);
}

void Nfa::add_transition(int from, int symbol, int to) {
  if (to < 0 || to >= num_states()) throw std::out_of_range("transition target out of range");
  insert_sorted(delta_.at(from).at(symbol), to);
}

void Nfa::clear_transitions(int q, int symbol) { delta_.at(q).at(symbol).clear(); }

void Nfa::remove_transition(int from, int symbol, int to) {
  auto& succ = delta_.at(from).at(symbol);
  auto it = std::lower_bound(succ.begin(), succ.end(), to);
  if (it != succ.end() && *it == to) succ.erase(it);
}

std::vector<int> Nfa::enabled_symbols(int q) const {
  std::vector<int> out;
  for (int a = 0; a < num_symbols(); ++a) {
    if (enabled(q, a)) out.push_back(a);
  }
  return out;
}

bool Nfa::has_transition(int from, int symbol, int to) const {
  const auto& succ = successors(from, symbol);
  return std::binary_search(succ.begin(), succ.end(), to);
}

int Nfa::num_transitions() const {
  int n = 0;
  for (const auto& row : delta_) {
    for (const auto& succ : row) n += static_cast<int>(succ.size());
  }
  return n;
}

std::vector<int> Nfa::post(std::span<const int> from, int symbol) const {
  std::vector<int> out;
  for (int q : from) {
    for (int t : successors(q, symbol)) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Nfa::accepts(std::span<const int> word) const {
  std::vector<int> current = initial_;
  for (int symbol : word) {
    if (current.empty()) return false;
    if (symbol < 0 || symbol >= num_symbols()) return false;
    current = post(current, symbol);
  }
  return !current.empty();
}

}  // namespace opac
