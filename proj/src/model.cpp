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

#include "opac/model.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "opac/format.h"

namespace opac {

int Mdp::state_index(std::string_view name) const {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) throw std::out_of_range(fmt::format("unknown state '{}'", name));
  return static_cast<int>(it - states.begin());
}

int Mdp::action_index(std::string_view name) const {
  auto it = std::find(actions.begin(), actions.end(), name);
  if (it == actions.end()) throw std::out_of_range(fmt::format("unknown action '{}'", name));
  return static_cast<int>(it - actions.begin());
}

bool Mdp::is_secret(int s) const {
  return std::binary_search(secret.begin(), secret.end(), s);
}

bool Mdp::operator==(const Mdp& other) const {
  if (states != other.states || actions != other.actions || secret != other.secret ||
      lambda != other.lambda || pi0.size() != other.pi0.size() || pi0 != other.pi0 ||
      trans.size() != other.trans.size()) {
    return false;
  }
  for (std::size_t a = 0; a < trans.size(); ++a) {
    if (trans[a].rows() != other.trans[a].rows() || trans[a].cols() != other.trans[a].cols() ||
        trans[a] != other.trans[a]) {
      return false;
    }
  }
  return true;
}

ModelError::ModelError(const std::string& what, int line, int column)
    : std::runtime_error(line > 0 ? fmt::format("{}:{}: {}", line, column, what) : what),
      line_(line),
      column_(column) {}

void ValidationReport::add(Severity severity, std::string message, std::string location) {
  if (severity == Severity::kError) ok = false;
  issues.push_back({severity, std::move(message), std::move(location)});
}

int ValidationReport::num_errors() const {
  return static_cast<int>(std::count_if(issues.begin(), issues.end(), [](const auto& i) {
    return i.severity == Severity::kError;
  }));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

[[noreturn]] void fail_at(const YAML::Node& node, const std::string& msg) {
  const YAML::Mark mark = node.Mark();
  if (mark.is_null()) throw ModelError(msg);
  throw ModelError(msg, mark.line + 1, mark.column + 1);
}

YAML::Node require(const YAML::Node& root, const char* key) {
  YAML::Node node = root[key];
  if (!node) fail_at(root, fmt::format("missing key '{}'", key));
  return node;
}

std::vector<std::string> name_list(const YAML::Node& node, const char* key) {
  if (!node.IsSequence()) fail_at(node, fmt::format("'{}' must be a list", key));
  std::vector<std::string> out;
  for (const auto& item : node) {
    if (!item.IsScalar()) fail_at(item, fmt::format("'{}' entries must be names", key));
    out.push_back(item.as<std::string>());
  }
  return out;
}

double number(const YAML::Node& node) {
  if (!node.IsScalar()) fail_at(node, "expected a number");
  const std::string& text = node.Scalar();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail_at(node, fmt::format("expected a number, got '{}'", text));
  }
  return value;
}

Eigen::VectorXd number_list(const YAML::Node& node, const char* key) {
  if (!node.IsSequence()) fail_at(node, fmt::format("'{}' must be a list of numbers", key));
  Eigen::VectorXd out(static_cast<Eigen::Index>(node.size()));
  Eigen::Index i = 0;
  for (const auto& item : node) out(i++) = number(item);
  return out;
}

void check_unique(const std::vector<std::string>& names, const YAML::Node& node,
                  const char* key) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) fail_at(node, fmt::format("duplicate name '{}' in '{}'", n, key));
  }
}

}  // namespace

Mdp parse_model(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ModelError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  if (!root.IsMap()) throw ModelError("model document must be a mapping of keys", 1, 1);

  Mdp m;
  const YAML::Node states = require(root, "states");
  m.states = name_list(states, "states");
  if (m.states.empty()) fail_at(states, "'states' must not be empty");
  check_unique(m.states, states, "states");

  const YAML::Node actions = require(root, "actions");
  m.actions = name_list(actions, "actions");
  if (m.actions.empty()) fail_at(actions, "'actions' must not be empty");
  check_unique(m.actions, actions, "actions");

  const auto n = static_cast<Eigen::Index>(m.states.size());
  const YAML::Node pi0 = require(root, "pi0");
  m.pi0 = number_list(pi0, "pi0");
  if (m.pi0.size() != n) {
    fail_at(pi0, fmt::format("dimension mismatch: pi0 has {} entries, expected {}", m.pi0.size(), n));
  }

  const YAML::Node trans = require(root, "trans");
  if (!trans.IsMap()) fail_at(trans, "'trans' must map each action to a matrix");
  for (const auto& kv : trans) {
    const auto key = kv.first.as<std::string>();
    if (std::find(m.actions.begin(), m.actions.end(), key) == m.actions.end()) {
      fail_at(kv.first, fmt::format("'trans' names unknown action '{}'", key));
    }
  }
  for (const auto& action : m.actions) {
    const YAML::Node rows = trans[action];
    if (!rows) fail_at(trans, fmt::format("'trans' has no matrix for action '{}'", action));
    if (!rows.IsSequence() || static_cast<Eigen::Index>(rows.size()) != n) {
      fail_at(rows, fmt::format("dimension mismatch: matrix for '{}' must have {} rows", action, n));
    }
    Eigen::MatrixXd h(n, n);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
      const Eigen::VectorXd r = number_list(row, "trans");
      if (r.size() != n) {
        fail_at(row, fmt::format("dimension mismatch: row {} of '{}' has {} entries, expected {}",
                                 i + 1, action, r.size(), n));
      }
      h.row(i++) = r.transpose();
    }
    m.trans.push_back(std::move(h));
  }

  const YAML::Node secret = require(root, "secret");
  for (const auto& name : name_list(secret, "secret")) {
    auto it = std::find(m.states.begin(), m.states.end(), name);
    if (it == m.states.end()) fail_at(secret, fmt::format("unknown state '{}' in secret set", name));
    m.secret.push_back(static_cast<int>(it - m.states.begin()));
  }
  std::sort(m.secret.begin(), m.secret.end());
  m.secret.erase(std::unique(m.secret.begin(), m.secret.end()), m.secret.end());

  m.lambda = number(require(root, "lambda"));
  return m;
}

Mdp load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open model file '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

bool is_plain_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  }) && s != "true" && s != "false" && s != "null" && s != "~";
}

std::string quote(const std::string& s) {
  if (is_plain_name(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string names(const std::vector<std::string>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + quote(v[i]);
  return out + "]";
}

template <typename Vec>
std::string numbers(const Vec& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_double(v(i));
  return out + "]";
}

}  // namespace

std::string serialize_model(const Mdp& m) {
  std::string out;
  out += "states: " + names(m.states) + "\n";
  out += "actions: " + names(m.actions) + "\n";
  out += "pi0: " + numbers(m.pi0) + "\n";
  out += "trans:\n";
  for (std::size_t a = 0; a < m.actions.size(); ++a) {
    out += "  " + quote(m.actions[a]) + ":\n";
    for (Eigen::Index i = 0; i < m.trans[a].rows(); ++i) {
      out += "    - " + numbers(m.trans[a].row(i)) + "\n";
    }
  }
  std::vector<std::string> secret_names;
  for (int s : m.secret) secret_names.push_back(m.states.at(s));
  out += "secret: " + names(secret_names) + "\n";
  out += "lambda: " + format_double(m.lambda) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_mdp(const Mdp& m, double tol) {
  ValidationReport report;
  const int n = m.num_states();
  if (n == 0) report.add(Severity::kError, "model has no states", "states");
  if (m.num_actions() == 0) report.add(Severity::kError, "model has no actions", "actions");

  if (m.pi0.size() != n) {
    report.add(Severity::kError, fmt::format("pi0 has {} entries, expected {}", m.pi0.size(), n),
               "pi0");
  } else {
    for (int i = 0; i < n; ++i) {
      if (!(m.pi0(i) >= -tol && m.pi0(i) <= 1.0 + tol)) {
        report.add(Severity::kError, fmt::format("entry {} is outside [0,1]", format_double(m.pi0(i))),
                   fmt::format("pi0[{}]", m.states[i]));
      }
    }
    if (n > 0 && !(std::abs(m.pi0.sum() - 1.0) <= tol)) {
      report.add(Severity::kError,
                 fmt::format("entries sum to {}, expected 1", format_double(m.pi0.sum())), "pi0");
    }
  }

  if (static_cast<int>(m.trans.size()) != m.num_actions()) {
    report.add(Severity::kError, "one transition matrix per action is required", "trans");
  } else {
    for (int a = 0; a < m.num_actions(); ++a) {
      const Eigen::MatrixXd& h = m.trans[a];
      const std::string where = fmt::format("trans[{}]", m.actions[a]);
      if (h.rows() != n || h.cols() != n) {
        report.add(Severity::kError, fmt::format("matrix is {}x{}, expected {}x{}", h.rows(),
                                                 h.cols(), n, n),
                   where);
        continue;
      }
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          if (!(h(i, j) >= -tol && h(i, j) <= 1.0 + tol)) {
            report.add(Severity::kError,
                       fmt::format("entry ({},{}) = {} is outside [0,1]", i + 1, j + 1,
                                   format_double(h(i, j))),
                       where);
          }
        }
        const double col = h.col(j).sum();
        if (!(std::abs(col - 1.0) <= tol)) {
          report.add(Severity::kError,
                     fmt::format("column {} (from state '{}') sums to {}, expected 1", j + 1,
                                 m.states[j], format_double(col)),
                     where);
        }
      }
    }
  }

  for (int s : m.secret) {
    if (s < 0 || s >= n) report.add(Severity::kError, "secret index out of range", "secret");
  }
  if (n > 0 && static_cast<int>(m.secret.size()) >= n) {
    report.add(Severity::kError, "secret must be strict subset of states", "secret");
  }
  if (m.secret.empty()) {
    report.add(Severity::kWarning, "secret set is empty; every belief is compliant", "secret");
  }
  if (!(m.lambda >= 0.0 && m.lambda <= 1.0)) {
    report.add(Severity::kError, fmt::format("lambda = {} is outside [0,1]", format_double(m.lambda)),
               "lambda");
  }

  if (report.ok && secret_mass(m, m.pi0) > m.lambda + kBeliefTol) {
    report.add(Severity::kWarning, "initial belief already exceeds the opacity threshold", "pi0");
  }
  return report;
}

double secret_mass(const Mdp& m, const Eigen::VectorXd& belief) {
  double mass = 0.0;
  for (int s : m.secret) mass += belief(s);
  return mass;
}

Nfa mdp_to_nfa(const Mdp& m) {
  Nfa nfa(m.states, m.actions);
  for (int s = 0; s < m.num_states(); ++s) {
    if (m.pi0(s) > 0.0) nfa.add_initial(s);
  }
  for (int a = 0; a < m.num_actions(); ++a) {
    const Eigen::MatrixXd& h = m.trans[a];
    for (int from = 0; from < m.num_states(); ++from) {
      for (int to = 0; to < m.num_states(); ++to) {
        if (h(to, from) > 0.0) nfa.add_transition(from, a, to);
      }
    }
  }
  return nfa;
}

CanonicalMdp canonical_reorder(const Mdp& m) {
  const int n = m.num_states();
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  if (n == 0 || !m.is_secret(n - 1)) return {m, perm};

  int keep = -1;
  for (int s = 0; s < n; ++s) {
    if (!m.is_secret(s)) {
      keep = s;
      break;
    }
  }
  if (keep < 0) throw std::invalid_argument("canonical_reorder: every state is secret");
  std::swap(perm[keep], perm[n - 1]);

  Mdp out;
  out.actions = m.actions;
  out.lambda = m.lambda;
  out.states.resize(n);
  out.pi0.resize(n);
  for (int i = 0; i < n; ++i) {
    out.states[i] = m.states[perm[i]];
    out.pi0(i) = m.pi0(perm[i]);
    if (m.is_secret(perm[i])) out.secret.push_back(i);
  }
  for (const Eigen::MatrixXd& h : m.trans) {
    Eigen::MatrixXd p(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) p(i, j) = h(perm[i], perm[j]);
    }
    out.trans.push_back(std::move(p));
  }
  return {std::move(out), std::move(perm)};
}

}  // namespace opac
