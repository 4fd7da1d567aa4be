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

#include "opac/abstraction.h"

#include <algorithm>

#include <fmt/format.h>

#include "opac/belief.h"

namespace opac {

bool boxes_overlap(const Box& a, const Box& b, OverlapMode mode) {
  if (a.dim() != b.dim()) throw std::invalid_argument("boxes_overlap: dimension mismatch");
  for (Eigen::Index d = 0; d < a.dim(); ++d) {
    const double lo = std::max(a.lo(d), b.lo(d));
    const double hi = std::min(a.hi(d), b.hi(d));
    // A box that is flat in this dimension has no interior to share, so the
    // strict test falls back to the closed one there.
    const bool flat =
        std::min(a.hi(d) - a.lo(d), b.hi(d) - b.lo(d)) <= 2 * kGeomTol;
    const bool strict = mode == OverlapMode::kStrict && !flat;
    if (strict ? !(lo < hi - kGeomTol) : !(lo <= hi + kGeomTol)) return false;
  }
  return true;
}

int BeliefAbstraction::state_of_cell(int cell_id) const {
  auto it = std::find(cells.begin(), cells.end(), cell_id);
  return it == cells.end() || cell_id < 0 ? -1 : static_cast<int>(it - cells.begin());
}

BeliefAbstraction build_abstraction(const Mdp& m, const Partition& p,
                                    const AbstractionOptions& options) {
  BeliefAbstraction t;
  std::vector<std::string> names;
  for (const auto& c : p.cells) {
    if (c.status != CellStatus::kSafe) continue;
    t.cells.push_back(c.id);
    names.push_back(fmt::format("q{}", c.id));
  }
  t.bad_state = static_cast<int>(t.cells.size());
  t.cells.push_back(-1);
  names.emplace_back(kBadStateName);
  t.nfa = Nfa(std::move(names), m.actions);

  const int x0_cell = locate_cell(reduce(m.pi0), p);
  if (p.cell(x0_cell).status != CellStatus::kSafe) {
    throw AbstractionError(fmt::format(
        "initial belief lies in bad cell {}; refine the partition around it first", x0_cell));
  }
  t.initial_state = t.state_of_cell(x0_cell);
  t.nfa.add_initial(t.initial_state);

  std::vector<AffineDecomposition<double>> decomps;
  for (int a = 0; a < m.num_actions(); ++a) decomps.push_back(decomposition(m, a));

  for (int q = 0; q < t.bad_state; ++q) {
    const Box& from = p.cell(t.cells[q]).box;
    for (int a = 0; a < m.num_actions(); ++a) {
      const Box reach = reach_box(decomps[a], from, options.clip);
      for (const auto& target : p.cells) {
        if (target.status == CellStatus::kExcluded) continue;
        if (!boxes_overlap(reach, target.box, options.overlap)) continue;
        t.nfa.add_transition(
            q, a, target.status == CellStatus::kBad ? t.bad_state : t.state_of_cell(target.id));
      }
    }
  }
  return t;
}

std::string describe(const PruneEvent& e, const BeliefAbstraction& t) {
  const std::string& state = t.nfa.states().at(e.state);
  if (e.kind == PruneEvent::Kind::kStateDeleted) {
    return fmt::format("delete {}: {}", state, e.reason);
  }
  return fmt::format("disable {} at {}: {}", t.nfa.alphabet().at(e.action), state, e.reason);
}

PruneResult prune(const BeliefAbstraction& t, PruneOrder order) {
  const int n = t.nfa.num_states();
  const int k = t.nfa.num_symbols();
  Nfa work = t.nfa;
  std::vector<bool> deleted(n, false);
  std::vector<PruneEvent> log;

  std::vector<int> visit;
  for (int q = 0; q < n; ++q) {
    if (q != t.bad_state) visit.push_back(q);
  }
  if (order == PruneOrder::kDescending) std::reverse(visit.begin(), visit.end());

  bool changed = true;
  while (changed) {
    changed = false;
    for (int q : visit) {
      if (deleted[q]) continue;
      for (int a = 0; a < k; ++a) {
        if (!work.enabled(q, a)) continue;
        const auto& succ = work.successors(q, a);
        std::string reason;
        if (std::binary_search(succ.begin(), succ.end(), t.bad_state)) {
          reason = "may reach bad";
        } else {
          auto it = std::find_if(succ.begin(), succ.end(), [&](int s) { return deleted[s]; });
          if (it != succ.end()) reason = fmt::format("may reach deleted {}", work.states()[*it]);
        }
        if (reason.empty()) continue;
        work.clear_transitions(q, a);
        log.push_back({PruneEvent::Kind::kActionDisabled, q, a, std::move(reason)});
        changed = true;
      }
      if (work.enabled_symbols(q).empty()) {
        deleted[q] = true;
        log.push_back({PruneEvent::Kind::kStateDeleted, q, -1, "no enabled action left"});
        changed = true;
        if (q == t.initial_state) {
          throw InitialStatePrunedError(fmt::format(
              "initial state {} was pruned; the current partition may be too coarse, try a finer "
              "grid",
              work.states()[q]));
        }
      }
    }
  }

  // Rebuild over the surviving states, keeping their relative order.
  std::vector<int> remap(n, -1);
  std::vector<std::string> names;
  BeliefAbstraction out;
  for (int q = 0; q < n; ++q) {
    if (deleted[q]) continue;
    remap[q] = static_cast<int>(names.size());
    names.push_back(work.states()[q]);
    out.cells.push_back(t.cells[q]);
  }
  out.nfa = Nfa(std::move(names), work.alphabet());
  out.bad_state = remap[t.bad_state];
  out.initial_state = remap[t.initial_state];
  out.nfa.add_initial(out.initial_state);
  for (int q = 0; q < n; ++q) {
    if (deleted[q]) continue;
    for (int a = 0; a < k; ++a) {
      for (int s : work.successors(q, a)) out.nfa.add_transition(remap[q], a, remap[s]);
    }
  }
  return {std::move(out), std::move(log)};
}

}  // namespace opac
