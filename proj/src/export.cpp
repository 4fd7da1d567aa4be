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

#include "opac/export.h"

#include <algorithm>

#include <fmt/format.h>

#include "opac/format.h"

namespace opac {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string dot_id(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

const char* edge_style(int action) {
  switch (action) {
    case 0:
      return "solid";
    case 1:
      return "dashed";
    default:
      return "dotted";
  }
}

}  // namespace

std::string cells_csv(const Partition& p) {
  std::string out = "id";
  for (int d = 1; d <= p.dim; ++d) out += fmt::format(",lo{}", d);
  for (int d = 1; d <= p.dim; ++d) out += fmt::format(",hi{}", d);
  out += ",status\n";
  for (const auto& c : p.cells) {
    out += std::to_string(c.id);
    for (int d = 0; d < p.dim; ++d) out += "," + format_double(c.box.lo(d));
    for (int d = 0; d < p.dim; ++d) out += "," + format_double(c.box.hi(d));
    out += fmt::format(",{}\n", to_string(c.status));
  }
  return out;
}

std::string abstraction_dot(const BeliefAbstraction& t, const std::string& name) {
  const Nfa& nfa = t.nfa;
  std::string out = fmt::format("digraph {} {{\n  rankdir=LR;\n  node [shape=circle];\n",
                                dot_id(name));
  out += "  __start [shape=point];\n";
  for (int q = 0; q < nfa.num_states(); ++q) {
    out += fmt::format("  {}{};\n", dot_id(nfa.states()[q]),
                       q == t.bad_state ? " [shape=doublecircle]" : "");
  }
  for (int q : nfa.initial()) out += fmt::format("  __start -> {};\n", dot_id(nfa.states()[q]));
  for (int q = 0; q < nfa.num_states(); ++q) {
    for (int a = 0; a < nfa.num_symbols(); ++a) {
      for (int to : nfa.successors(q, a)) {
        out += fmt::format("  {} -> {} [label={}, style={}];\n", dot_id(nfa.states()[q]),
                           dot_id(nfa.states()[to]), dot_id(nfa.alphabet()[a]), edge_style(a));
      }
    }
  }
  return out + "}\n";
}

std::string edges_csv(const BeliefAbstraction& t) {
  const Nfa& nfa = t.nfa;
  std::string out = "src,action,dst\n";
  for (int q = 0; q < nfa.num_states(); ++q) {
    for (int a = 0; a < nfa.num_symbols(); ++a) {
      for (int to : nfa.successors(q, a)) {
        out += fmt::format("{},{},{}\n", csv_field(nfa.states()[q]), csv_field(nfa.alphabet()[a]),
                           csv_field(nfa.states()[to]));
      }
    }
  }
  return out;
}

std::string partition_svg(const Partition& p, const Mdp& m) {
  if (p.dim != 2) throw std::invalid_argument("partition_svg: only 2-D partitions can be drawn");
  constexpr double kSize = 400.0, kMargin = 40.0;
  auto px = [&](double x) { return kMargin + x * kSize; };
  auto py = [&](double y) { return kMargin + (1.0 - y) * kSize; };
  auto num = [](double v) { return fmt::format("{:.2f}", v); };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" "
      "viewBox=\"0 0 {0} {0}\">\n",
      num(kSize + 2 * kMargin));
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (const auto& c : p.cells) {
    const char* fill = c.status == CellStatus::kBad        ? "#d98cb3"
                       : c.status == CellStatus::kExcluded ? "#eeeeee"
                                                           : "none";
    out += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" fill-opacity=\"0.5\" "
        "stroke=\"#999999\" stroke-width=\"0.5\"/>\n",
        num(px(c.box.lo(0))), num(py(c.box.hi(1))), num((c.box.hi(0) - c.box.lo(0)) * kSize),
        num((c.box.hi(1) - c.box.lo(1)) * kSize), fill);
    if (c.status == CellStatus::kSafe) {
      out += fmt::format(
          "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">q{}</text>\n",
          num(px(0.5 * (c.box.lo(0) + c.box.hi(0)))),
          num(py(0.5 * (c.box.lo(1) + c.box.hi(1))) + 4.0), c.id);
    }
  }

  // Simplex boundary x1 + x2 = 1.
  out += fmt::format(
      "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
      num(px(0)), num(py(1)), num(px(1)), num(py(0)));

  // Threshold line: sum of secret coordinates = lambda, clipped to the unit square.
  const bool s0 = m.is_secret(0), s1 = m.is_secret(1);
  std::vector<std::pair<double, double>> seg;
  if (s0 && s1) {
    seg = {{0.0, m.lambda}, {m.lambda, 0.0}};
  } else if (s0) {
    seg = {{m.lambda, 0.0}, {m.lambda, 1.0}};
  } else if (s1) {
    seg = {{0.0, m.lambda}, {1.0, m.lambda}};
  }
  if (!seg.empty()) {
    out += fmt::format(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#3366cc\" stroke-width=\"1.5\" "
        "stroke-dasharray=\"6,3\"/>\n",
        num(px(seg[0].first)), num(py(seg[0].second)), num(px(seg[1].first)),
        num(py(seg[1].second)));
  }

  out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"black\"/>\n", num(px(m.pi0(0))),
                     num(py(m.pi0(1))));
  out += fmt::format(
      "<text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>\n"
      "<text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>\n",
      num(px(1) + 4), num(py(0) + 4), m.states[0], num(px(0) - 4), num(py(1) - 8), m.states[1]);
  return out + "</svg>\n";
}

std::string allowed_csv(const RestrictedMdp& r) {
  const Mdp& m = r.base;
  std::string out = "state,allowed,vacuous,removed\n";
  for (int s = 0; s < m.num_states(); ++s) {
    std::string acts;
    if (r.alive[s]) {
      for (std::size_t i = 0; i < r.allowed[s].size(); ++i) {
        acts += (i ? ";" : "") + m.actions[r.allowed[s][i]];
      }
    }
    out += fmt::format("{},{},{},{}\n", csv_field(m.states[s]), csv_field(acts),
                       r.vacuous[s] ? 1 : 0, r.alive[s] ? 0 : 1);
  }
  return out;
}

std::string policy_csv(const Policy& policy, const Mdp& m) {
  std::string out = "state,action,value\n";
  for (int s = 0; s < m.num_states(); ++s) {
    const int a = policy.choice[s];
    out += fmt::format("{},{},{}\n", csv_field(m.states[s]), a < 0 ? "" : csv_field(m.actions[a]),
                       format_double(policy.value[s]));
  }
  return out;
}

std::string edit_dot(const EditAutomaton& ea) {
  std::string out = "digraph Tf {\n  rankdir=LR;\n  node [shape=circle];\n";
  out += "  __start [shape=point];\n";
  for (const auto& s : ea.states) out += fmt::format("  {};\n", dot_id(s));
  out += fmt::format("  __start -> {};\n", dot_id(ea.states.at(ea.initial)));
  for (const auto& e : ea.edges) {
    out += fmt::format("  {} -> {} [label={}, style={}];\n", dot_id(ea.states[e.from]),
                       dot_id(ea.states[e.to]),
                       dot_id(ea.alphabet[e.actual] + "/" + ea.alphabet[e.output]),
                       edge_style(e.output));
  }
  return out + "}\n";
}

std::string trace_csv(const std::vector<TraceRecord>& trace, const Mdp& m) {
  std::string out = "step,real,output";
  for (const auto& s : m.states) out += ",b(" + csv_field(s) + ")";
  out += ",secret_mass,cell\n";
  for (const auto& r : trace) {
    out += fmt::format("{},{},{}", r.step, r.real_action ? m.actions[*r.real_action] : "",
                       r.output_action >= 0 ? m.actions[r.output_action] : "");
    for (Eigen::Index i = 0; i < r.belief.size(); ++i) out += "," + format_double(r.belief(i));
    out += fmt::format(",{},{}\n", format_double(r.secret_mass),
                       r.cell ? std::to_string(*r.cell) : "");
  }
  return out;
}

}  // namespace opac
