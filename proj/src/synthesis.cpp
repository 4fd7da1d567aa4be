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

#include "opac/synthesis.h"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

namespace opac {

// ---------------------------------------------------------------------------
// Product

ProductNfa product(const Nfa& t1, const Nfa& t2, ProductScope scope) {
  const int k = t1.num_symbols();
  std::vector<std::string> s1 = t1.alphabet(), s2 = t2.alphabet();
  std::sort(s1.begin(), s1.end());
  std::sort(s2.begin(), s2.end());
  if (s1 != s2) throw std::invalid_argument("product: alphabets differ");
  // Symbol a of t1 is symbol sym2[a] of t2.
  std::vector<int> sym2(k);
  for (int a = 0; a < k; ++a) sym2[a] = t2.symbol_index(t1.alphabet()[a]);

  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> pairs;
  auto intern = [&](int p, int q) {
    auto [it, inserted] = index.try_emplace({p, q}, static_cast<int>(pairs.size()));
    if (inserted) pairs.emplace_back(p, q);
    return it->second;
  };

  std::vector<int> initial;
  for (int p : t1.initial()) {
    for (int q : t2.initial()) initial.push_back(intern(p, q));
  }
  if (scope == ProductScope::kAllPairs) {
    for (int p = 0; p < t1.num_states(); ++p) {
      for (int q = 0; q < t2.num_states(); ++q) intern(p, q);
    }
  }

  // Successor lists are discovered breadth-first; for kAllPairs every pair is
  // already interned so the walk adds nothing new.
  std::vector<std::vector<std::vector<int>>> edges;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [p, q] = pairs[i];
    std::vector<std::vector<int>> out(k);
    for (int a = 0; a < k; ++a) {
      for (int p2 : t1.successors(p, a)) {
        for (int q2 : t2.successors(q, sym2[a])) out[a].push_back(intern(p2, q2));
      }
    }
    edges.push_back(std::move(out));
  }

  std::vector<std::string> names;
  for (const auto& [p, q] : pairs) {
    names.push_back(fmt::format("({},{})", t1.states()[p], t2.states()[q]));
  }
  ProductNfa result{Nfa(std::move(names), t1.alphabet()), pairs};
  for (int q : initial) result.nfa.add_initial(q);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (int a = 0; a < k; ++a) {
      for (int to : edges[i][a]) result.nfa.add_transition(static_cast<int>(i), a, to);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Action restriction

bool RestrictedMdp::allows(int s, int a) const {
  return alive.at(s) && std::binary_search(allowed.at(s).begin(), allowed.at(s).end(), a);
}

RestrictedMdp restrict_actions(const Mdp& m, const Nfa& abstraction, ProductScope scope) {
  const int n = m.num_states();
  const int k = m.num_actions();
  const ProductNfa prod = product(mdp_to_nfa(m), abstraction, scope);

  RestrictedMdp r;
  r.base = m;
  r.alive.assign(n, true);
  r.vacuous.assign(n, true);
  std::vector<std::vector<bool>> mask(n, std::vector<bool>(k, true));
  for (int i = 0; i < prod.nfa.num_states(); ++i) {
    const auto [s, q] = prod.pairs[i];
    // An abstraction state with no moves at all (the pruned `bad` sink) is
    // never occupied, so it does not constrain the literal all-pairs reading.
    if (abstraction.enabled_symbols(q).empty()) continue;
    r.vacuous[s] = false;
    for (int a = 0; a < k; ++a) {
      if (!prod.nfa.enabled(i, a)) mask[s][a] = false;
    }
  }
  r.allowed.resize(n);
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < k; ++a) {
      if (mask[s][a]) r.allowed[s].push_back(a);
    }
  }
  return r;
}

RestrictedMdp prune_blocking(RestrictedMdp r) {
  const Mdp& m = r.base;
  const int n = m.num_states();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      if (!r.alive[s]) continue;
      auto& acts = r.allowed[s];
      const auto old_size = acts.size();
      std::erase_if(acts, [&](int a) {
        for (int t = 0; t < n; ++t) {
          if (m.trans[a](t, s) > 0.0 && !r.alive[t]) return true;
        }
        return false;
      });
      if (acts.size() != old_size) changed = true;
      if (acts.empty()) {
        r.alive[s] = false;
        changed = true;
        if (m.pi0(s) > 0.0) {
          throw BlockingPruneError(fmt::format(
              "initial state '{}' has no privacy-safe action left; the current partition may be "
              "too coarse, try a finer grid",
              m.states[s]));
        }
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Policies

std::vector<double> evaluate_policy(const Mdp& m, const std::vector<int>& choice,
                                    const std::vector<int>& target) {
  const int n = m.num_states();
  std::vector<bool> is_target(n, false);
  for (int t : target) is_target.at(t) = true;

  // Backward reachability of the target in the induced chain.
  std::vector<bool> can_reach = is_target;
  for (bool grew = true; grew;) {
    grew = false;
    for (int s = 0; s < n; ++s) {
      if (can_reach[s] || choice[s] < 0) continue;
      for (int t = 0; t < n; ++t) {
        if (can_reach[t] && m.trans[choice[s]](t, s) > 0.0) {
          can_reach[s] = true;
          grew = true;
          break;
        }
      }
    }
  }

  std::vector<int> unknown;
  std::vector<int> slot(n, -1);
  for (int s = 0; s < n; ++s) {
    if (can_reach[s] && !is_target[s]) {
      slot[s] = static_cast<int>(unknown.size());
      unknown.push_back(s);
    }
  }
  const auto u = static_cast<Eigen::Index>(unknown.size());
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(u, u);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(u);
  for (Eigen::Index i = 0; i < u; ++i) {
    const int s = unknown[i];
    const Eigen::MatrixXd& h = m.trans[choice[s]];
    for (int t = 0; t < n; ++t) {
      if (is_target[t]) {
        rhs(i) += h(t, s);
      } else if (slot[t] >= 0) {
        lhs(i, slot[t]) -= h(t, s);
      }
    }
  }
  const Eigen::VectorXd sol = lhs.fullPivLu().solve(rhs);

  std::vector<double> value(n, 0.0);
  for (int s = 0; s < n; ++s) {
    if (is_target[s]) value[s] = 1.0;
    if (slot[s] >= 0) value[s] = std::clamp(sol(slot[s]), 0.0, 1.0);
  }
  return value;
}

Policy synthesize_reach_policy(const RestrictedMdp& r, const std::vector<int>& target,
                               double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("synthesize_reach_policy: eps must be positive");
  const Mdp& m = r.base;
  const int n = m.num_states();
  std::vector<bool> is_target(n, false);
  for (int t : target) is_target.at(t) = true;

  auto usable = [&](int s) { return r.alive[s] && !r.allowed[s].empty(); };
  auto q_value = [&](const Eigen::VectorXd& v, int s, int a) {
    return m.trans[a].col(s).dot(v);
  };

  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (int s = 0; s < n; ++s) {
    if (is_target[s] && usable(s)) v(s) = 1.0;
  }
  constexpr int kMaxIterations = 1000000;
  for (int it = 0; it < kMaxIterations; ++it) {
    Eigen::VectorXd next = v;
    for (int s = 0; s < n; ++s) {
      if (!usable(s) || is_target[s]) continue;
      double best = 0.0;
      for (int a : r.allowed[s]) best = std::max(best, q_value(v, s, a));
      next(s) = best;
    }
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = std::move(next);
    if (change < eps) break;
  }

  // Among near-optimal actions, pick one that moves towards already-settled
  // states so no state idles in a loop that never reaches the target.
  const double tie = std::max(eps, 1e-12) * 10.0;
  Policy policy;
  policy.choice.assign(n, -1);
  std::vector<bool> settled(n, false);
  for (int s = 0; s < n; ++s) {
    if (!usable(s)) continue;
    if (is_target[s] || v(s) <= 0.0) {
      policy.choice[s] = r.allowed[s].front();
      settled[s] = is_target[s];
    }
  }
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<bool> frontier = settled;
    for (int s = 0; s < n; ++s) {
      if (!usable(s) || settled[s] || v(s) <= 0.0) continue;
      for (int a : r.allowed[s]) {
        if (q_value(v, s, a) < v(s) - tie) continue;
        bool progresses = false;
        for (int t = 0; t < n && !progresses; ++t) {
          progresses = frontier[t] && m.trans[a](t, s) > 0.0;
        }
        if (progresses) {
          policy.choice[s] = a;
          settled[s] = true;
          grew = true;
          break;
        }
      }
    }
  }
  for (int s = 0; s < n; ++s) {
    if (usable(s) && policy.choice[s] < 0) policy.choice[s] = r.allowed[s].front();
  }
  policy.value = evaluate_policy(m, policy.choice, target);
  return policy;
}

}  // namespace opac
