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

#include "opac/edit.h"

#include <algorithm>

#include <fmt/format.h>

#include "opac/belief.h"

namespace opac {

int EditAutomaton::state_of_cell(int cell_id) const {
  auto it = std::find(cells.begin(), cells.end(), cell_id);
  return it == cells.end() ? -1 : static_cast<int>(it - cells.begin());
}

std::vector<int> EditAutomaton::outputs(int state, int actual) const {
  std::vector<int> out;
  auto it = std::lower_bound(edges.begin(), edges.end(), EditEdge{state, actual, -1, -1});
  for (; it != edges.end() && it->from == state && it->actual == actual; ++it) {
    if (out.empty() || out.back() != it->output) out.push_back(it->output);
  }
  return out;
}

EditAutomaton build_edit_automaton(const BeliefAbstraction& pruned) {
  const Nfa& t = pruned.nfa;
  EditAutomaton ea;
  ea.alphabet = t.alphabet();
  std::vector<int> remap(t.num_states(), -1);
  for (int q = 0; q < t.num_states(); ++q) {
    if (q == pruned.bad_state) continue;
    remap[q] = ea.num_states();
    ea.states.push_back(t.states()[q]);
    ea.cells.push_back(pruned.cells[q]);
  }
  ea.initial = remap.at(pruned.initial_state);
  for (int q = 0; q < t.num_states(); ++q) {
    if (remap[q] < 0) continue;
    for (int actual = 0; actual < t.num_symbols(); ++actual) {
      for (int o = 0; o < t.num_symbols(); ++o) {
        for (int to : t.successors(q, o)) {
          if (remap[to] < 0) {
            throw std::invalid_argument("build_edit_automaton: abstraction is not pruned");
          }
          ea.edges.push_back({remap[q], actual, o, remap[to]});
        }
      }
    }
  }
  std::sort(ea.edges.begin(), ea.edges.end());
  return ea;
}

std::string_view to_string(EditStrategy s) {
  switch (s) {
    case EditStrategy::kLexFirst:
      return "lex-first";
    case EditStrategy::kMatchIfSafe:
      return "match-if-safe";
    case EditStrategy::kUniformRandom:
      return "uniform-random";
  }
  return "?";
}

EditStrategy parse_edit_strategy(std::string_view name) {
  for (auto s : {EditStrategy::kLexFirst, EditStrategy::kMatchIfSafe, EditStrategy::kUniformRandom}) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument(fmt::format("unknown edit strategy '{}'", name));
}

// ---------------------------------------------------------------------------
// Engine

EditEngine::EditEngine(const EditAutomaton& automaton, const Mdp& m, const Partition& p,
                       EditStrategy strategy, std::uint64_t seed)
    : automaton_(&automaton),
      model_(&m),
      partition_(&p),
      strategy_(strategy),
      rng_(seed),
      belief_(m.pi0) {
  cell_ = locate_cell(reduce(belief_), p);
  state_ = automaton.state_of_cell(cell_);
  if (state_ != automaton.initial) {
    throw EditError("EditEngine: initial belief does not lie in the automaton's initial cell");
  }
}

int EditEngine::choose(int actual) {
  if (state_ < 0) {
    throw EditError(fmt::format("observer belief is in cell {}, which has no edit state", cell_));
  }
  const std::vector<int> outs = automaton_->outputs(state_, actual);
  if (outs.empty()) {
    throw EditError(fmt::format("no output defined at {} for actual event {}",
                                automaton_->states[state_], actual));
  }
  switch (strategy_) {
    case EditStrategy::kLexFirst:
      return outs.front();
    case EditStrategy::kMatchIfSafe:
      return std::binary_search(outs.begin(), outs.end(), actual) ? actual : outs.front();
    case EditStrategy::kUniformRandom: {
      std::uniform_int_distribution<std::size_t> pick(0, outs.size() - 1);
      return outs[pick(rng_)];
    }
  }
  return outs.front();
}

void EditEngine::observe(int output) {
  belief_ = belief_update(*model_, output, belief_);
  cell_ = locate_cell(reduce(belief_), *partition_);
  state_ = automaton_->state_of_cell(cell_);
}

int EditEngine::step(int actual) {
  const int o = choose(actual);
  observe(o);
  return o;
}

// ---------------------------------------------------------------------------
// Bounded verification

namespace {

struct EditSearch {
  const Mdp& m;
  const Nfa& support;
  int depth;
  EditStrategy strategy;
  EditReport& report;
  std::vector<int> actual_word;
  std::vector<int> output_word;

  void fail(int requirement, std::string message) {
    report.ok = false;
    report.counterexample =
        EditCounterexample{strategy, requirement, actual_word, output_word, std::move(message)};
  }

  // Returns false once a counterexample is recorded.
  bool run(const EditEngine& engine, const std::vector<int>& support_states) {
    if (static_cast<int>(actual_word.size()) == depth) {
      ++report.sequences_checked;
      return true;
    }
    for (int actual = 0; actual < m.num_actions(); ++actual) {
      EditEngine next = engine;
      actual_word.push_back(actual);
      ++report.steps_checked;

      int output = -1;
      try {
        output = next.choose(actual);
      } catch (const EditError& e) {
        fail(1, e.what());
        return false;
      }
      output_word.push_back(output);
      if (output < 0 || output >= m.num_actions()) {
        fail(2, fmt::format("output symbol {} is not an action of the model", output));
        return false;
      }
      const std::vector<int> post = support.post(support_states, output);
      if (post.empty()) {
        fail(2, "output word is not generated by the model");
        return false;
      }
      next.observe(output);
      const double mass = secret_mass(m, next.observer_belief());
      if (mass > m.lambda + kBeliefTol) {
        fail(3, fmt::format("observer secret mass {} exceeds threshold {}", mass, m.lambda));
        return false;
      }
      if (!run(next, post)) return false;
      actual_word.pop_back();
      output_word.pop_back();
    }
    return true;
  }
};

}  // namespace

EditReport verify_edit_requirements(const EditAutomaton& automaton, const Mdp& m,
                                    const Partition& p, int depth,
                                    const std::vector<EditStrategy>& strategies,
                                    std::uint64_t seed) {
  if (depth < 1) throw std::invalid_argument("verify_edit_requirements: depth must be >= 1");
  EditReport report;
  const Nfa support = mdp_to_nfa(m);
  for (EditStrategy strategy : strategies) {
    EditEngine engine(automaton, m, p, strategy, seed);
    const double mass = secret_mass(m, engine.observer_belief());
    EditSearch search{m, support, depth, strategy, report, {}, {}};
    if (mass > m.lambda + kBeliefTol) {
      search.fail(3, "initial belief exceeds the threshold");
      break;
    }
    if (!search.run(engine, support.initial())) break;
  }
  return report;
}

std::string format_report(const EditReport& report, const Mdp& m) {
  std::string out = fmt::format("edit requirements: {}\nsequences checked: {}\nsteps checked: {}\n",
                                report.ok ? "hold" : "VIOLATED", report.sequences_checked,
                                report.steps_checked);
  if (!report.counterexample) return out;
  const auto& cx = *report.counterexample;
  auto word = [&](const std::vector<int>& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
      s += i ? " " : "";
      s += (w[i] >= 0 && w[i] < m.num_actions()) ? m.actions[w[i]] : fmt::format("#{}", w[i]);
    }
    return s;
  };
  out += fmt::format("counterexample (strategy {}, requirement {}): {}\n", to_string(cx.strategy),
                     cx.requirement, cx.message);
  out += fmt::format("  actual: {}\n  output: {}\n", word(cx.actual_word), word(cx.output_word));
  return out;
}

}  // namespace opac
