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

#include <random>

#include <gtest/gtest.h>

#include "opac/pipeline.h"
#include "test_support.h"

namespace opac {
namespace {

using test::Example1;

const std::vector<double> kFigureWidths{0.2, 0.2};

Box Q2() { return Box(Eigen::Vector2d(0, 0.4), Eigen::Vector2d(0.2, 0.6)); }

GTEST_TEST(SimulateTest, Example1) {
  const Mdp m = Example1();
  const auto one = simulate(m, fixed_actions({0}), 1);
  ASSERT_EQ(one.size(), 2);
  EXPECT_FALSE(one[0].real_action.has_value());
  EXPECT_EQ(one[0].output_action, -1);
  EXPECT_EQ(one[1].real_action, 0);
  EXPECT_LE((one[1].belief - Eigen::Vector3d(0.12, 0.27, 0.61)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(one[1].secret_mass, 0.39, 1e-12);

  const auto zero = simulate(m, fixed_actions({0}), 0);
  ASSERT_EQ(zero.size(), 1);
  EXPECT_EQ(zero[0].belief, m.pi0);
  EXPECT_NEAR(zero[0].secret_mass, 0.4, 1e-12);
  EXPECT_FALSE(zero[0].cell.has_value());

  const Partition p = build_grid(kFigureWidths, m);
  EXPECT_EQ(simulate(m, fixed_actions({0}), 0, &p)[0].cell, 5);
}

GTEST_TEST(SimulateTest, IdentityModelIsConstant) {
  Mdp m = Example1();
  m.trans = {Eigen::Matrix3d::Identity(), Eigen::Matrix3d::Identity()};
  for (const auto& r : simulate(m, random_actions(2, 3), 50)) EXPECT_EQ(r.belief, m.pi0);
}

GTEST_TEST(SimulateTest, StaysOnTheSimplex) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const Mdp m = test::RandomModel(rng, {.num_states = 4, .num_actions = 3, .sparse = true});
    for (const auto& r : simulate(m, random_actions(3, trial), 1000)) {
      EXPECT_NEAR(r.belief.sum(), 1.0, 1e-9);
      EXPECT_GE(r.belief.minCoeff(), 0.0);
      EXPECT_NEAR(r.secret_mass, secret_mass(m, r.belief), 0.0);
      EXPECT_GE(r.secret_mass, 0.0);
      EXPECT_LE(r.secret_mass, 1.0 + 1e-9);
    }
  }
}

GTEST_TEST(ActionSourceTest, Sources) {
  auto cyc = fixed_actions({1, 0, 0});
  EXPECT_EQ(cyc(0), 1);
  EXPECT_EQ(cyc(4), 0);
  EXPECT_EQ(cyc(3), 1);
  EXPECT_THROW(fixed_actions({}), std::invalid_argument);

  auto a = random_actions(3, 9);
  auto b = random_actions(3, 9);
  for (int t = 0; t < 100; ++t) {
    const int x = a(t);
    EXPECT_EQ(x, b(t));
    EXPECT_GE(x, 0);
    EXPECT_LT(x, 3);
  }

  const Mdp m = Example1();
  Policy policy;
  policy.choice = {0, 0, 0};
  policy.value = {1, 1, 1};
  auto p = policy_actions(m, policy, 4);
  for (int t = 0; t < 20; ++t) EXPECT_EQ(p(t), 0);
}

GTEST_TEST(OpacityMonitorTest, Thresholds) {
  const Mdp m = Example1();
  const auto trace = simulate(m, fixed_actions({0}), 100);
  EXPECT_FALSE(opacity_monitor(trace, 0.8).has_value());
  EXPECT_EQ(opacity_monitor(trace, 0.39), 0);
  EXPECT_FALSE(opacity_monitor(trace, 1.0).has_value());

  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const Mdp r = test::RandomModel(rng);
    const auto t = simulate(r, random_actions(2, trial), 30);
    EXPECT_FALSE(opacity_monitor(t, 1.0).has_value());
    const double initial = secret_mass(r, r.pi0);
    EXPECT_EQ(opacity_monitor(t, initial * 0.99), 0);
  }
}

GTEST_TEST(SoundnessCheckTest, Example1) {
  const Mdp m = Example1();
  const Partition p = build_grid(kFigureWidths, m);
  const BeliefAbstraction closed = build_abstraction(m, p, {.overlap = OverlapMode::kClosed});
  const SoundnessReport dut = soundness_check(m, p, closed, 6, 1000);
  EXPECT_TRUE(dut.ok());
  EXPECT_TRUE(dut.exhaustive);
  EXPECT_EQ(dut.sequences_checked, 64);

  const SoundnessReport none = soundness_check(m, p, closed, 0, 1000);
  EXPECT_TRUE(none.ok());
  EXPECT_EQ(none.sequences_checked, 1);

  // Too many sequences to enumerate: sampled instead.
  const SoundnessReport sampled = soundness_check(m, p, closed, 20, 300, 5);
  EXPECT_FALSE(sampled.exhaustive);
  EXPECT_EQ(sampled.sequences_checked, 300);
  EXPECT_TRUE(sampled.ok());
}

GTEST_TEST(SoundnessCheckTest, FaultInjection) {
  const Mdp m = Example1();
  const Partition p = build_grid(kFigureWidths, m);
  BeliefAbstraction closed = build_abstraction(m, p, {.overlap = OverlapMode::kClosed});
  // pi0 moves to cell 1 under sigma1.
  const int from = closed.initial_state;
  const int to = closed.state_of_cell(locate_cell(reduce(belief_update(m, 0, m.pi0)), p));
  ASSERT_TRUE(closed.nfa.has_transition(from, 0, to));
  closed.nfa.remove_transition(from, 0, to);
  const SoundnessReport dut = soundness_check(m, p, closed, 6, 1000);
  EXPECT_FALSE(dut.ok());
  EXPECT_NE(dut.violations[0].find("sigma1"), std::string::npos);

  // Words whose exact trajectory takes the removed step.
  const int from_cell = closed.initial_cell();
  const int to_cell = closed.cells[to];
  int expected = 0;
  for (int w = 0; w < 64; ++w) {
    Eigen::VectorXd b = m.pi0;
    bool hit = false;
    for (int i = 0; i < 6 && !hit; ++i) {
      const int a = (w >> (5 - i)) & 1;
      const int before = locate_cell(reduce(b), p);
      b = belief_update(m, a, b);
      hit = before == from_cell && a == 0 && locate_cell(reduce(b), p) == to_cell;
      if (p.cell(locate_cell(reduce(b), p)).status != CellStatus::kSafe) break;
    }
    expected += hit;
  }
  EXPECT_EQ(static_cast<int>(dut.violations.size()), expected);
}

GTEST_TEST(BruteReachBoxTest, Example1CellQ2) {
  const Mdp m = Example1();
  for (int a = 0; a < 2; ++a) {
    const auto d = decomposition(m, a);
    const Box analytic = reach_box(d, Q2());
    const Box sampled = brute_reach_box(d, Q2(), 10000);
    EXPECT_TRUE(analytic.contains(sampled, 1e-12));
    // F is affine and every corner of q2 lies in X, so the exact image box
    // is spanned by the corner images.
    Eigen::Vector2d lo = Eigen::Vector2d::Constant(1e9), hi = -lo;
    for (double x0 : {0.0, 0.2}) {
      for (double x1 : {0.4, 0.6}) {
        const Eigen::VectorXd y = reduce(belief_update(m, a, lift(Eigen::Vector2d(x0, x1))));
        lo = lo.cwiseMin(y);
        hi = hi.cwiseMax(y);
      }
    }
    EXPECT_LE((sampled.lo - lo).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((sampled.hi - hi).cwiseAbs().maxCoeff(), 1e-12);
  }
}

GTEST_TEST(BruteReachBoxTest, DegenerateBox) {
  const Mdp m = Example1();
  const auto d = decomposition(m, 1);
  const Eigen::Vector2d x(0.3, 0.1);
  const Box dut = brute_reach_box(d, Box::point(x), 10);
  EXPECT_EQ(dut.lo, dut.hi);
  EXPECT_LE((dut.lo - reduce(belief_update(m, 1, lift(x)))).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(brute_reach_box(d, Q2(), 0), std::invalid_argument);
  EXPECT_THROW(brute_reach_box(d, Box(Eigen::Vector2d(0.8, 0.8), Eigen::Vector2d(1, 1)), 100),
               std::invalid_argument);
}

GTEST_TEST(BruteReachBoxTest, ContainedInAnalyticBox) {
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 2;
    const Mdp m = canonical_reorder(test::RandomModel(rng, {.num_states = n})).model;
    const Eigen::VectorXd c = test::RandomReducedBelief(n - 1, rng);
    Eigen::VectorXd lo(n - 1), hi(n - 1);
    for (int i = 0; i < n - 1; ++i) {
      lo(i) = c(i) * u(rng);
      hi(i) = std::min(1.0, c(i) + 0.3 * u(rng));
    }
    const auto d = decomposition(m, trial % 2);
    EXPECT_TRUE(reach_box(d, Box(lo, hi)).contains(brute_reach_box(d, Box(lo, hi), 500), 1e-12));
  }
}

GTEST_TEST(RestrictedOpacityTest, Example1) {
  const Mdp m = Example1();
  const AbstractionResult stage = run_abstraction(m, kFigureWidths);
  const RestrictedMdp r = prune_blocking(restrict_actions(m, stage.pruned.nfa));
  const RestrictedOpacityReport dut = verify_restricted_opacity(r, 6);
  EXPECT_TRUE(dut.ok());
  EXPECT_EQ(dut.sequences_checked, 1);  // sigma1 only
}

GTEST_TEST(RestrictedOpacityTest, FaultInjection) {
  Mdp m = Example1();
  m.lambda = 0.55;
  RestrictedMdp r;
  r.base = m;
  r.allowed = {{0, 1}, {0, 1}, {0, 1}};
  r.vacuous.assign(3, false);
  r.alive.assign(3, true);
  const RestrictedOpacityReport dut = verify_restricted_opacity(r, 6);
  ASSERT_FALSE(dut.ok());
  EXPECT_NE(dut.violation->find("sigma2 sigma2"), std::string::npos) << *dut.violation;
}

GTEST_TEST(SimulateEditedTest, Example1) {
  const Mdp m = Example1();
  const AbstractionResult stage = run_abstraction(m, kFigureWidths);
  const EditAutomaton ea = build_edit_automaton(stage.pruned);
  const auto trace =
      simulate_edited(m, EditEngine(ea, m, stage.partition), fixed_actions({1}), 10);
  ASSERT_EQ(trace.size(), 11);
  for (std::size_t t = 1; t < trace.size(); ++t) {
    EXPECT_EQ(trace[t].real_action, 1);
    EXPECT_EQ(trace[t].output_action, 0);  // lex-first always hides sigma2
    EXPECT_EQ(trace[t].cell, locate_cell(reduce(trace[t].belief), stage.partition));
  }
  EXPECT_FALSE(opacity_monitor(trace, m.lambda).has_value());
}

}  // namespace
}  // namespace opac
