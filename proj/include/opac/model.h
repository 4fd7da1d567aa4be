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
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "opac/nfa.h"
#include "opac/tolerance.h"

namespace opac {

/// Markov decision process observed through its actions.
///
/// trans[a] is the N x N matrix H_a with H_a(i, j) = P(s_j, a, s_i), so each
/// column is a distribution over successors and a belief evolves as
/// b' = H_a * b. Every action is available in every state.
struct Mdp {
  std::vector<std::string> states;
  Eigen::VectorXd pi0;
  std::vector<std::string> actions;
  std::vector<Eigen::MatrixXd> trans;
  /// Sorted indices into `states`.
  std::vector<int> secret;
  double lambda = 1.0;

  int num_states() const { return static_cast<int>(states.size()); }
  int num_actions() const { return static_cast<int>(actions.size()); }
  /// Throws std::out_of_range for unknown names.
  int state_index(std::string_view name) const;
  int action_index(std::string_view name) const;
  bool is_secret(int s) const;

  bool operator==(const Mdp& other) const;
};

/// Error raised by parse_model. line/column are 1-based, 0 when unknown.
class ModelError : public std::runtime_error {
 public:
  ModelError(const std::string& what, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

enum class Severity { kWarning, kError };

struct ValidationIssue {
  Severity severity;
  std::string message;
  std::string location;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;

  void add(Severity severity, std::string message, std::string location);
  int num_errors() const;
};

Mdp parse_model(std::string_view text);
Mdp load_model(const std::string& path);
/// Emits the same document format parse_model reads. Numbers use the
/// shortest round-trip representation, so parse(serialize(m)) == m.
std::string serialize_model(const Mdp& m);

ValidationReport validate_mdp(const Mdp& m, double tol = kStochasticTol);

/// Support automaton T_M: s' in delta(s, a) iff P(s, a, s') > 0, and s is
/// initial iff pi0(s) > 0.
Nfa mdp_to_nfa(const Mdp& m);

struct CanonicalMdp {
  Mdp model;
  /// perm[new_index] = old_index.
  std::vector<int> perm;
};

/// Moves the lowest-indexed non-secret state to the last position so the
/// eliminated belief coordinate is non-secret. Identity if the last state is
/// already non-secret. Requires a non-secret state to exist.
CanonicalMdp canonical_reorder(const Mdp& m);

/// Sum of belief mass on secret states.
double secret_mass(const Mdp& m, const Eigen::VectorXd& belief);

}  // namespace opac
