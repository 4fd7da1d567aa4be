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

#include "opac/cli.h"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "opac/belief.h"
#include "opac/export.h"
#include "opac/format.h"
#include "opac/model.h"
#include "opac/oracle_sim.h"
#include "opac/pipeline.h"
#include "opac/synthesis.h"

namespace opac::cli {

namespace {

namespace fs = std::filesystem;

void write_file(const RunConfig& config, const std::string& name, const std::string& content) {
  fs::create_directories(config.out_dir);
  const fs::path path = fs::path(config.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << content;
}

struct Prepared {
  Mdp model;
  CanonicalMdp canon;
  std::vector<double> widths;
};

// Loads and validates the model. Returns an exit code on failure.
std::optional<int> prepare(const RunConfig& config, std::ostream& log, Prepared& out) {
  try {
    out.model = load_model(config.model_path);
  } catch (const ModelError& e) {
    log << "error: " << config.model_path << ":" << e.what() << "\n";
    return kUsageOrIo;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kUsageOrIo;
  }
  if (config.lambda_override) out.model.lambda = *config.lambda_override;

  const ValidationReport report = validate_mdp(out.model);
  for (const auto& issue : report.issues) {
    log << (issue.severity == Severity::kError ? "error" : "warning") << ": " << issue.location
        << ": " << issue.message << "\n";
  }
  if (!report.ok) return kInvalidModel;

  out.canon = canonical_reorder(out.model);
  const auto dim = static_cast<std::size_t>(out.model.num_states() - 1);
  if (config.widths.size() == 1) {
    out.widths.assign(dim, config.widths.front());
  } else if (config.widths.size() == dim) {
    out.widths = config.widths;
  } else {
    log << fmt::format("error: {} widths given for {} reduced dimensions\n", config.widths.size(),
                       dim);
    return kUsageOrIo;
  }
  for (double w : out.widths) {
    if (!(w > 0.0)) {
      log << "error: grid widths must be positive\n";
      return kUsageOrIo;
    }
  }
  return std::nullopt;
}

std::string events_text(const std::vector<PruneEvent>& events, const BeliefAbstraction& raw) {
  std::string out;
  for (const auto& e : events) out += describe(e, raw) + "\n";
  return out;
}

struct Stage {
  std::optional<int> exit;
  AbstractionResult result;
};

// Partition, abstraction and pruning. With `artifacts`, writes the files of
// the abstract command.
Stage abstraction_stage(const RunConfig& config, const Prepared& prep, std::ostream& log,
                        bool artifacts) {
  Stage stage;
  const Mdp& canon = prep.canon.model;
  std::string text;
  auto finish = [&](std::optional<int> code) {
    if (artifacts) write_file(config, "log.txt", text);
    stage.exit = code;
    return stage;
  };

  try {
    stage.result.partition =
        refine_initial(build_grid(prep.widths, canon), reduce(canon.pi0), canon, config.refine_depth);
  } catch (const RefinementError& e) {
    text += fmt::format("refinement failed: {}\n", e.what());
    log << "error: " << e.what() << "\n";
    return finish(kAbstractionFailed);
  }
  const Partition& p = stage.result.partition;
  text += fmt::format("cells: {} total, {} safe, {} bad, {} excluded\n", p.num_cells(),
                      p.count(CellStatus::kSafe), p.count(CellStatus::kBad),
                      p.count(CellStatus::kExcluded));
  if (artifacts) {
    write_file(config, "cells.csv", cells_csv(p));
    if (p.dim == 2) write_file(config, "partition.svg", partition_svg(p, canon));
  }

  try {
    stage.result.raw = build_abstraction(canon, p, {config.overlap, config.clip});
  } catch (const AbstractionError& e) {
    text += fmt::format("abstraction failed: {}\n", e.what());
    log << "error: " << e.what() << "\n";
    return finish(kAbstractionFailed);
  }
  const BeliefAbstraction& raw = stage.result.raw;
  text += fmt::format("initial cell: {}\nraw transitions: {}\n", raw.initial_cell(),
                      raw.nfa.num_transitions());
  if (artifacts) {
    write_file(config, "abstraction.dot", abstraction_dot(raw, "T"));
    write_file(config, "abstraction_edges.csv", edges_csv(raw));
  }

  try {
    PruneResult pr = prune(raw);
    stage.result.pruned = std::move(pr.pruned);
    stage.result.log = std::move(pr.log);
  } catch (const InitialStatePrunedError& e) {
    text += fmt::format("pruning failed: {}\n", e.what());
    log << "error: " << e.what() << "\n";
    return finish(kAbstractionFailed);
  }
  text += events_text(stage.result.log, raw);
  text += fmt::format("pruned states: {}\npruned transitions: {}\n",
                      stage.result.pruned.nfa.num_states() - 1,
                      stage.result.pruned.nfa.num_transitions());
  if (artifacts) {
    write_file(config, "pruned.dot", abstraction_dot(stage.result.pruned, "T_pruned"));
    write_file(config, "pruned_edges.csv", edges_csv(stage.result.pruned));
  }
  return finish(std::nullopt);
}

std::optional<std::vector<int>> state_indices(const Mdp& m, const std::vector<std::string>& names,
                                              std::ostream& log) {
  std::vector<int> out;
  for (const auto& n : names) {
    try {
      out.push_back(m.state_index(n));
    } catch (const std::out_of_range& e) {
      log << "error: " << e.what() << "\n";
      return std::nullopt;
    }
  }
  return out;
}

}  // namespace

int cmd_validate(const RunConfig& config, std::ostream& log) {
  Prepared prep;
  if (auto code = prepare(config, log, prep)) return *code;
  log << fmt::format("ok: {} states, {} actions, lambda {}\n", prep.model.num_states(),
                     prep.model.num_actions(), format_double(prep.model.lambda));
  return kOk;
}

int cmd_abstract(const RunConfig& config, std::ostream& log) {
  Prepared prep;
  if (auto code = prepare(config, log, prep)) return *code;
  Stage stage = abstraction_stage(config, prep, log, true);
  if (stage.exit) return *stage.exit;
  log << fmt::format("abstraction: {} safe cells, {} states after pruning\n",
                     stage.result.partition.count(CellStatus::kSafe),
                     stage.result.pruned.nfa.num_states() - 1);
  return kOk;
}

int cmd_synthesize(const RunConfig& config, const std::string& mode,
                   const std::vector<std::string>& target, bool all_pairs, std::ostream& log) {
  if (mode != "direct" && mode != "edit") {
    log << fmt::format("error: unknown mode '{}'\n", mode);
    return kUsageOrIo;
  }
  Prepared prep;
  if (auto code = prepare(config, log, prep)) return *code;
  Stage stage = abstraction_stage(config, prep, log, false);
  if (stage.exit) return *stage.exit;

  if (mode == "edit") {
    const EditAutomaton ea = build_edit_automaton(stage.result.pruned);
    write_file(config, "edit.dot", edit_dot(ea));
    write_file(config, "log.txt",
               fmt::format("edit automaton: {} states, {} edges\n", ea.num_states(),
                           ea.edges.size()));
    log << fmt::format("edit automaton: {} states, {} edges\n", ea.num_states(), ea.edges.size());
    return kOk;
  }

  const auto target_idx = state_indices(prep.model, target, log);
  if (!target_idx) return kUsageOrIo;

  const RestrictedMdp restricted = restrict_actions(
      prep.model, stage.result.pruned.nfa,
      all_pairs ? ProductScope::kAllPairs : ProductScope::kReachable);
  RestrictedMdp pruned;
  try {
    pruned = prune_blocking(restricted);
  } catch (const BlockingPruneError& e) {
    write_file(config, "allowed.csv", allowed_csv(restricted));
    write_file(config, "log.txt", fmt::format("blocking prune failed: {}\n", e.what()));
    log << "error: " << e.what() << "\n";
    return kBlockingPruned;
  }
  write_file(config, "allowed.csv", allowed_csv(pruned));
  std::string text = "direct synthesis\n";
  if (!target.empty()) {
    const Policy policy = synthesize_reach_policy(pruned, *target_idx);
    write_file(config, "policy.csv", policy_csv(policy, prep.model));
    text += "policy written for target";
    for (const auto& t : target) text += " " + t;
    text += "\n";
  }
  write_file(config, "log.txt", text);
  log << text;
  return kOk;
}

int cmd_simulate(const RunConfig& config, int steps, const std::string& action_spec, bool edited,
                 const std::vector<std::string>& target, std::ostream& log) {
  if (steps < 0) {
    log << "error: --steps must be nonnegative\n";
    return kUsageOrIo;
  }
  Prepared prep;
  if (auto code = prepare(config, log, prep)) return *code;
  const Mdp& canon = prep.canon.model;

  std::optional<Stage> stage;
  if (edited || action_spec == "policy") {
    stage = abstraction_stage(config, prep, log, false);
    if (stage->exit) return *stage->exit;
  }

  ActionSource source;
  if (action_spec == "random") {
    source = random_actions(canon.num_actions(), config.seed);
  } else if (action_spec == "policy") {
    if (target.empty()) {
      log << "error: --actions policy needs --target\n";
      return kUsageOrIo;
    }
    const auto target_idx = state_indices(canon, target, log);
    if (!target_idx) return kUsageOrIo;
    RestrictedMdp pruned;
    try {
      pruned = prune_blocking(restrict_actions(canon, stage->result.pruned.nfa));
    } catch (const BlockingPruneError& e) {
      log << "error: " << e.what() << "\n";
      return kBlockingPruned;
    }
    source = policy_actions(canon, synthesize_reach_policy(pruned, *target_idx), config.seed);
  } else {
    std::vector<int> word;
    std::stringstream ss(action_spec);
    for (std::string name; std::getline(ss, name, ',');) {
      try {
        word.push_back(canon.action_index(name));
      } catch (const std::out_of_range& e) {
        log << "error: " << e.what() << "\n";
        return kUsageOrIo;
      }
    }
    if (word.empty()) {
      log << "error: empty action list\n";
      return kUsageOrIo;
    }
    source = fixed_actions(std::move(word));
  }

  std::vector<TraceRecord> trace;
  std::optional<Partition> grid;
  if (edited) {
    const EditAutomaton ea = build_edit_automaton(stage->result.pruned);
    try {
      trace = simulate_edited(
          canon, EditEngine(ea, canon, stage->result.partition, config.strategy, config.seed + 1),
          source, steps);
    } catch (const EditError& e) {
      log << "error: " << e.what() << "\n";
      return kVerificationFailed;
    }
  } else {
    grid = stage ? stage->result.partition : build_grid(prep.widths, canon);
    trace = simulate(canon, source, steps, &*grid);
  }

  // Report beliefs in the model's own state order.
  for (auto& r : trace) {
    Eigen::VectorXd b(r.belief.size());
    for (Eigen::Index i = 0; i < b.size(); ++i) b(prep.canon.perm[i]) = r.belief(i);
    r.belief = std::move(b);
  }
  write_file(config, "trace.csv", trace_csv(trace, prep.model));

  if (auto step = opacity_monitor(trace, prep.model.lambda)) {
    log << fmt::format("opacity violated at step {} (secret mass {} > {})\n", *step,
                       format_double(trace[*step].secret_mass), format_double(prep.model.lambda));
    return kOpacityViolated;
  }
  log << fmt::format("no violation in {} steps\n", steps);
  return kOk;
}

int cmd_verify(const RunConfig& config, int depth, int samples, std::ostream& log) {
  if (depth < 1) {
    log << "error: --depth must be at least 1\n";
    return kUsageOrIo;
  }
  Prepared prep;
  if (auto code = prepare(config, log, prep)) return *code;
  Stage stage = abstraction_stage(config, prep, log, false);
  if (stage.exit) return *stage.exit;
  const Mdp& canon = prep.canon.model;
  const Partition& p = stage.result.partition;

  std::string text;
  bool ok = true;

  const BeliefAbstraction closed = build_abstraction(canon, p, {OverlapMode::kClosed, false});
  const SoundnessReport sound = soundness_check(canon, p, closed, depth, samples, config.seed);
  text += fmt::format("soundness: {} sequences ({}), {} violations\n", sound.sequences_checked,
                      sound.exhaustive ? "exhaustive" : "sampled", sound.violations.size());
  for (const auto& v : sound.violations) text += "  " + v + "\n";
  ok = ok && sound.ok();

  const EditAutomaton ea = build_edit_automaton(stage.result.pruned);
  const EditReport edit = verify_edit_requirements(
      ea, canon, p, depth,
      {EditStrategy::kLexFirst, EditStrategy::kMatchIfSafe, EditStrategy::kUniformRandom},
      config.seed);
  text += format_report(edit, canon);
  ok = ok && edit.ok;

  try {
    const RestrictedMdp r = prune_blocking(restrict_actions(canon, stage.result.pruned.nfa));
    const RestrictedOpacityReport direct = verify_restricted_opacity(r, depth);
    text += fmt::format("direct synthesis: {} playable sequences, {}\n", direct.sequences_checked,
                        direct.ok() ? "opacity holds" : "VIOLATED: " + *direct.violation);
    ok = ok && direct.ok();
  } catch (const BlockingPruneError& e) {
    text += fmt::format("direct synthesis: not available ({})\n", e.what());
  }

  write_file(config, "verify.txt", text);
  log << text;
  return ok ? kOk : kVerificationFailed;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Belief-space opacity: abstraction and privacy-preserving synthesis for MDPs"};
  app.require_subcommand(1);

  RunConfig config;
  std::string overlap = "strict";
  std::string strategy = "lex-first";
  double lambda = 0.0;
  std::string mode = "direct";
  std::vector<std::string> target;
  bool all_pairs = false;
  int steps = 100;
  std::string actions = "random";
  bool edited = false;
  int depth = 6;
  int samples = 1000;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--model", config.model_path, "Model file")->required();
    sub->add_option("--lambda", lambda, "Override the model's opacity threshold")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--out", config.out_dir, "Output directory");
  };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--widths", config.widths, "Grid widths, one or one per reduced dimension")
        ->delimiter(',');
    sub->add_option("--overlap", overlap, "Overlap test for transitions")
        ->check(CLI::IsMember({"strict", "closed"}));
    sub->add_flag("--clip", config.clip, "Clamp reach boxes to [0,1] before overlap tests");
    sub->add_option("--refine-depth", config.refine_depth,
                    "Maximum bisections of the initial cell");
    sub->add_option("--seed", config.seed, "Random seed");
  };

  CLI::App* validate = app.add_subcommand("validate", "Parse and validate a model");
  common(validate);

  CLI::App* abstract = app.add_subcommand("abstract", "Build and prune the belief abstraction");
  common(abstract);
  grid(abstract);

  CLI::App* synthesize = app.add_subcommand("synthesize", "Direct or edit-function synthesis");
  common(synthesize);
  grid(synthesize);
  synthesize->add_option("--mode", mode, "direct or edit")->check(CLI::IsMember({"direct", "edit"}));
  synthesize->add_option("--target", target, "Target states for the reachability policy")
      ->delimiter(',');
  synthesize->add_flag("--all-pairs", all_pairs,
                       "Intersect allowed actions over all product pairs, not just reachable ones");

  CLI::App* simulate = app.add_subcommand("simulate", "Simulate the intruder's belief");
  common(simulate);
  grid(simulate);
  simulate->add_option("--steps", steps, "Number of steps");
  simulate->add_option("--actions", actions,
                       "Comma-separated action names (cycled), 'random' or 'policy'");
  simulate->add_option("--target", target, "Target states for --actions policy")->delimiter(',');
  simulate->add_flag("--edited", edited, "Route actions through the edit function");
  simulate->add_option("--strategy", strategy, "Edit output strategy")
      ->check(CLI::IsMember({"lex-first", "match-if-safe", "uniform-random"}));

  CLI::App* verify = app.add_subcommand("verify", "Bounded soundness and enforcement checks");
  common(verify);
  grid(verify);
  verify->add_option("--depth", depth, "Sequence length");
  verify->add_option("--samples", samples, "Random sequences when enumeration is too large");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageOrIo;
  }

  auto has_lambda = [&](CLI::App* sub) { return sub->count("--lambda") > 0; };
  for (CLI::App* sub : app.get_subcommands()) {
    if (has_lambda(sub)) config.lambda_override = lambda;
  }
  config.overlap = overlap == "closed" ? OverlapMode::kClosed : OverlapMode::kStrict;
  config.strategy = parse_edit_strategy(strategy);

  try {
    if (validate->parsed()) return cmd_validate(config, out);
    if (abstract->parsed()) return cmd_abstract(config, out);
    if (synthesize->parsed()) return cmd_synthesize(config, mode, target, all_pairs, out);
    if (simulate->parsed()) return cmd_simulate(config, steps, actions, edited, target, out);
    if (verify->parsed()) return cmd_verify(config, depth, samples, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageOrIo;
  }
  return kUsageOrIo;
}

}  // namespace opac::cli
