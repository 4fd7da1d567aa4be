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
#include <utility>
#include <vector>

#include "opac/model.h"
#include "opac/nfa.h"

namespace opac {

enum class ProductScope {
  /// Only pairs reachable from I1 x I2.
  kReachable,
  /// Every pair of Q1 x Q2.
  kAllPairs,
};

struct ProductNfa {
  Nfa nfa;
  /// pairs[q] = (state of first operand, state of second operand).
  std::vector<std::pair<int, int>> pairs;
};

/// Synchronous product: (p', q') in delta((p, q), a) iff p' in delta1(p, a)
/// and q' in delta2(q, a). The result uses the first operand's symbol
/// order. Throws std::invalid_argument when the alphabets differ as sets.
ProductNfa product(const Nfa& t1, const Nfa& t2, ProductScope scope = ProductScope::kReachable);

/// MDP with a per-state set of allowed actions.
struct RestrictedMdp {
  Mdp base;
  /// allowed[s] holds sorted action indices.
  std::vector<std::vector<int>> allowed;
  /// States that appear in no product state; their action set is unconstrained.
  std::vector<bool> vacuous;
  /// False once prune_blocking removed the state.
  std::vector<bool> alive;

  bool allows(int s, int a) const;
};

/// A'(s) = intersection over product states (s, q) of the actions with at
/// least one successor in T_M x T. `abstraction` is the pruned belief
/// abstraction; its alphabet must equal the model's actions.
RestrictedMdp restrict_actions(const Mdp& m, const Nfa& abstraction,
                               ProductScope scope = ProductScope::kReachable);

class BlockingPruneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Removes states without allowed actions and disables, at every remaining
/// state, each action whose positive-probability support touches a removed
/// state, to a fixpoint. Throws BlockingPruneError when a state with
/// pi0 > 0 is removed.
RestrictedMdp prune_blocking(RestrictedMdp r);

struct Policy {
  /// Chosen action per state; -1 for removed states.
  std::vector<int> choice;
  /// Probability of eventually reaching the target under `choice`.
  std::vector<double> value;
};

/// Memoryless policy maximizing the probability of reaching `target` with
/// allowed actions only. Value iteration runs until the sup-norm change is
/// below eps; near-optimal ties go to the lowest action index, subject to
/// making progress towards the target. Reported values are the exact
/// values of the returned policy.
Policy synthesize_reach_policy(const RestrictedMdp& r, const std::vector<int>& target,
                               double eps = 1e-10);

/// Reachability probability of `target` in the Markov chain induced by a
/// memoryless policy on `m`; choice[s] < 0 marks states never entered.
/// Solved as a linear system after a graph pass for probability-0 states.
std::vector<double> evaluate_policy(const Mdp& m, const std::vector<int>& choice,
                                    const std::vector<int>& target);

}  // namespace opac
