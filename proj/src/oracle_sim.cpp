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

#include "opac/oracle_sim.h"

#include <cmath>
#include <memory>
#include <random>

#include <fmt/format.h>

namespace opac {

ActionSource fixed_actions(std::vector<int> actions) {
  if (actions.empty()) throw std::invalid_argument("fixed_actions: empty action list");
  return [actions = std::move(actions)](int step) {
    return actions[static_cast<std::size_t>(step) % actions.size()];
  };
}

ActionSource random_actions(int num_actions, std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng, num_actions](int) {
    std::uniform_int_distribution<int> pick(0, num_actions - 1);
    return pick(*rng);
  };
}

namespace {

int sample(const Eigen::VectorXd& dist, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = u(rng);
  for (Eigen::Index i = 0; i < dist.size(); ++i) {
    r -= dist(i);
    if (r < 0.0) return static_cast<int>(i);
  }
  // Rounding left a sliver; return the last state with positive mass.
  for (Eigen::Index i = dist.size() - 1; i > 0; --i) {
    if (dist(i) > 0.0) return static_cast<int>(i);
  }
  return 0;
}

}  // namespace

ActionSource policy_actions(const Mdp& m, const Policy& policy, std::uint64_t seed) {
  struct State {
    std::mt19937_64 rng;
    int hidden;
  };
  auto st = std::make_shared<State>(State{std::mt19937_64(seed), -1});
  st->hidden = sample(m.pi0, st->rng);
  return [st, m, choice = policy.choice](int) {
    const int a = choice.at(st->hidden);
    if (a < 0) throw std::logic_error("policy_actions: hidden state has no policy action");
    st->hidden = sample(m.trans[a].col(st->hidden), st->rng);
    return a;
  };
}

std::vector<TraceRecord> simulate(const Mdp& m, ActionSource actions, int steps,
                                  const Partition* p) {
  std::vector<TraceRecord> trace;
  auto record = [&](int step, std::optional<int> real, int output, Eigen::VectorXd b) {
    TraceRecord r;
    r.step = step;
    r.real_action = real;
    r.output_action = output;
    r.secret_mass = secret_mass(m, b);
    if (p) r.cell = locate_cell(reduce(b), *p);
    r.belief = std::move(b);
    trace.push_back(std::move(r));
  };
  Eigen::VectorXd b = m.pi0;
  record(0, std::nullopt, -1, b);
  for (int t = 1; t <= steps; ++t) {
    const int a = actions(t - 1);
    b = belief_update(m, a, b);
    record(t, a, a, b);
  }
  return trace;
}

std::vector<TraceRecord> simulate_edited(const Mdp& m, EditEngine engine, ActionSource actions,
                                         int steps) {
  std::vector<TraceRecord> trace;
  auto record = [&](int step, std::optional<int> real, int output) {
    TraceRecord r;
    r.step = step;
    r.real_action = real;
    r.output_action = output;
    r.belief = engine.observer_belief();
    r.secret_mass = secret_mass(m, r.belief);
    r.cell = engine.current_cell();
    trace.push_back(std::move(r));
  };
  record(0, std::nullopt, -1);
  for (int t = 1; t <= steps; ++t) {
    const int a = actions(t - 1);
    const int o = engine.step(a);
    record(t, a, o);
  }
  return trace;
}

std::optional<int> opacity_monitor(const std::vector<TraceRecord>& trace, double lambda) {
  for (const auto& r : trace) {
    if (r.secret_mass > lambda + kBeliefTol) return r.step;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Soundness

namespace {

std::string word_text(const Mdp& m, const std::vector<int>& word) {
  std::string s;
  for (std::size_t i = 0; i < word.size(); ++i) s += (i ? " " : "") + m.actions[word[i]];
  return s;
}

// Returns an empty string when the trajectory is a path of `raw`.
std::string check_sequence(const Mdp& m, const Partition& p, const BeliefAbstraction& raw,
                           const std::vector<int>& word) {
  Eigen::VectorXd b = m.pi0;
  int state = raw.state_of_cell(locate_cell(reduce(b), p));
  if (state != raw.initial_state) return "initial belief is not in the initial state";
  for (std::size_t i = 0; i < word.size(); ++i) {
    b = belief_update(m, word[i], b);
    const int cell = locate_cell(reduce(b), p);
    const bool bad = p.cell(cell).status != CellStatus::kSafe;
    const int next = bad ? raw.bad_state : raw.state_of_cell(cell);
    if (!raw.nfa.has_transition(state, word[i], next)) {
      return fmt::format("after '{}' the belief moved {} -> {} (cell {}), which is not an edge",
                         word_text(m, {word.begin(), word.begin() + i + 1}),
                         raw.nfa.states()[state], raw.nfa.states()[next], cell);
    }
    if (bad) break;
    state = next;
  }
  return {};
}

}  // namespace

SoundnessReport soundness_check(const Mdp& m, const Partition& p, const BeliefAbstraction& raw,
                                int depth, int samples, std::uint64_t seed) {
  SoundnessReport report;
  const int k = m.num_actions();
  double total = 1.0;
  for (int i = 0; i < depth && total <= 1e4; ++i) total *= k;
  report.exhaustive = total <= 1e4;

  auto check = [&](const std::vector<int>& word) {
    ++report.sequences_checked;
    std::string v = check_sequence(m, p, raw, word);
    if (!v.empty()) report.violations.push_back(std::move(v));
  };

  if (report.exhaustive) {
    std::vector<int> word(depth, 0);
    while (true) {
      check(word);
      int i = depth - 1;
      while (i >= 0 && ++word[i] == k) word[i--] = 0;
      if (i < 0) break;
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, k - 1);
    for (int s = 0; s < samples; ++s) {
      std::vector<int> word(depth);
      for (int& a : word) a = pick(rng);
      check(word);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Direct synthesis check

namespace {

struct PlayableSearch {
  const RestrictedMdp& r;
  int depth;
  RestrictedOpacityReport& report;
  std::vector<int> word;

  void run(const std::vector<int>& states, const Eigen::VectorXd& belief) {
    const Mdp& m = r.base;
    if (static_cast<int>(word.size()) == depth) {
      ++report.sequences_checked;
      return;
    }
    bool extended = false;
    for (int a = 0; a < m.num_actions() && !report.violation; ++a) {
      std::vector<bool> next(m.num_states(), false);
      bool playable = false;
      for (int s : states) {
        if (!r.allows(s, a)) continue;
        playable = true;
        for (int t = 0; t < m.num_states(); ++t) {
          if (m.trans[a](t, s) > 0.0) next[t] = true;
        }
      }
      if (!playable) continue;
      extended = true;
      word.push_back(a);
      const Eigen::VectorXd b = belief_update(m, a, belief);
      const double mass = secret_mass(m, b);
      if (mass > m.lambda + kBeliefTol) {
        report.violation = fmt::format("after '{}' the secret mass is {} > {}", word_text(m, word),
                                       mass, m.lambda);
        return;
      }
      std::vector<int> next_states;
      for (int t = 0; t < m.num_states(); ++t) {
        if (next[t]) next_states.push_back(t);
      }
      run(next_states, b);
      word.pop_back();
    }
    if (!extended) ++report.sequences_checked;
  }
};

}  // namespace

RestrictedOpacityReport verify_restricted_opacity(const RestrictedMdp& r, int depth) {
  const Mdp& m = r.base;
  RestrictedOpacityReport report;
  if (secret_mass(m, m.pi0) > m.lambda + kBeliefTol) {
    report.violation = "initial belief exceeds the threshold";
    return report;
  }
  std::vector<int> initial;
  for (int s = 0; s < m.num_states(); ++s) {
    if (m.pi0(s) > 0.0) initial.push_back(s);
  }
  PlayableSearch search{r, depth, report, {}};
  search.run(initial, m.pi0);
  return report;
}

// ---------------------------------------------------------------------------
// Sampling oracle

namespace {

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};

}  // namespace

Box brute_reach_box(const AffineDecomposition<double>& d, const Box& box, int samples) {
  if (samples < 1) throw std::invalid_argument("brute_reach_box: samples must be >= 1");
  const Eigen::Index n = box.dim();
  if (n > static_cast<Eigen::Index>(std::size(kPrimes))) {
    throw std::invalid_argument("brute_reach_box: dimension too large for the Halton sequence");
  }
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  Eigen::VectorXd hi = -lo;
  bool any = false;
  auto visit = [&](const Eigen::VectorXd& x) {
    if (!in_reduced_simplex(x, 1e-15)) return;
    const Eigen::VectorXd y = decomp_eval(d, x, x);
    lo = lo.cwiseMin(y);
    hi = hi.cwiseMax(y);
    any = true;
  };

  Eigen::VectorXd x(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (Eigen::Index j = 0; j < n; ++j) x(j) = (mask >> j) & 1 ? box.hi(j) : box.lo(j);
    visit(x);
  }
  for (int i = 1; i <= samples; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      x(j) = box.lo(j) + radical_inverse(i, kPrimes[j]) * (box.hi(j) - box.lo(j));
    }
    visit(x);
  }
  if (!any) throw std::invalid_argument("brute_reach_box: box does not meet the simplex");
  return Box(lo, hi);
}

}  // namespace opac
