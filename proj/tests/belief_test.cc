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

#include "opac/belief.h"

#include <random>

#include <gtest/gtest.h>

#include "test_support.h"

namespace opac {
namespace {

using test::Example1;

constexpr double kTol = 1e-12;

void ExpectNear(const Eigen::VectorXd& actual, const Eigen::VectorXd& expected,
                double tol = kTol) {
  ASSERT_EQ(actual.size(), expected.size());
  EXPECT_LE((actual - expected).lpNorm<Eigen::Infinity>(), tol)
      << "actual: " << actual.transpose() << "\nexpected: " << expected.transpose();
}

GTEST_TEST(BeliefUpdateTest, Example1) {
  const Mdp m = Example1();
  ExpectNear(belief_update(m, 0, m.pi0), Eigen::Vector3d(0.12, 0.27, 0.61));
  ExpectNear(belief_update(m, 1, Eigen::Vector3d(0, 1, 0)), Eigen::Vector3d(0.65, 0, 0.35));
  EXPECT_THROW(belief_update(m, 2, m.pi0), std::out_of_range);
}

GTEST_TEST(BeliefUpdateTest, Identity) {
  const Eigen::Vector3d b(0.2, 0.3, 0.5);
  EXPECT_EQ(belief_update(Eigen::Matrix3d::Identity(), b), b);
}

GTEST_TEST(BeliefUpdateTest, WorksForOtherScalars) {
  const Eigen::Matrix2f h = (Eigen::Matrix2f() << 0.5f, 1.0f, 0.5f, 0.0f).finished();
  const Eigen::VectorXf b = belief_update(h, Eigen::Vector2f(1.0f, 0.0f));
  EXPECT_FLOAT_EQ(b(0), 0.5f);
}

GTEST_TEST(ReduceLiftTest, RoundTrip) {
  const Eigen::Vector3d b(0.3, 0.1, 0.6);
  ExpectNear(reduce(b), Eigen::Vector2d(0.3, 0.1));
  ExpectNear(lift(reduce(b)), b);
  EXPECT_EQ(lift(Eigen::Vector2d(0, 0)), Eigen::Vector3d(0, 0, 1));
  EXPECT_EQ(lift(Eigen::Vector2d(0.5, 0.5)), Eigen::Vector3d(0.5, 0.5, 0));
  EXPECT_EQ(reduce(lift(Eigen::Vector2d(0.25, 0.5))), Eigen::Vector2d(0.25, 0.5));
}

GTEST_TEST(DecompositionTest, Example1) {
  const Mdp m = Example1();
  const auto d1 = decomposition(m, 0);
  EXPECT_EQ(d1.a1, (Eigen::Matrix2d() << 0.2, 0.0, 0.4, 0.3).finished());
  EXPECT_EQ(d1.a2, (Eigen::Matrix2d() << 0.1, 0.1, 0.2, 0.2).finished());
  EXPECT_EQ(d1.b, Eigen::Vector2d(0.1, 0.2));
  EXPECT_EQ(d1.action, 0);

  const auto d2 = decomposition(m, 1);
  EXPECT_EQ(d2.a1, (Eigen::Matrix2d() << 0.4, 0.65, 0.2, 0.0).finished());
  EXPECT_EQ(d2.a2, (Eigen::Matrix2d() << 0.3, 0.3, 0.2, 0.2).finished());
  EXPECT_EQ(d2.b, Eigen::Vector2d(0.3, 0.2));
}

GTEST_TEST(DecompositionTest, Identity) {
  const auto d = decomposition(Eigen::Matrix3d::Identity());
  EXPECT_EQ(d.a1, Eigen::Matrix2d::Identity());
  EXPECT_EQ(d.a2, Eigen::Matrix2d::Zero());
  EXPECT_EQ(d.b, Eigen::Vector2d::Zero());
}

GTEST_TEST(DecompEvalTest, Example1Points) {
  const Mdp m = Example1();
  const auto d = decomposition(m, 0);
  // f(x, x) agrees with the full belief update.
  ExpectNear(decomp_eval(d, Eigen::Vector2d(0.3, 0.1), Eigen::Vector2d(0.3, 0.1)),
             Eigen::Vector2d(0.12, 0.27));
  ExpectNear(decomp_eval(d, Eigen::Vector2d(0, 0.4), Eigen::Vector2d(0.2, 0.6)),
             Eigen::Vector2d(0.02, 0.16));
  ExpectNear(decomp_eval(d, Eigen::Vector2d(0.2, 0.6), Eigen::Vector2d(0, 0.4)),
             Eigen::Vector2d(0.10, 0.38));
  EXPECT_THROW(decomp_eval(d, Eigen::Vector3d::Zero(), Eigen::Vector2d::Zero()),
               std::invalid_argument);
}

GTEST_TEST(ReachBoxTest, Example1CellQ2) {
  const Mdp m = Example1();
  const Box q2(Eigen::Vector2d(0, 0.4), Eigen::Vector2d(0.2, 0.6));
  const Box r1 = reach_box(decomposition(m, 0), q2);
  ExpectNear(r1.lo, Eigen::Vector2d(0.02, 0.16));
  ExpectNear(r1.hi, Eigen::Vector2d(0.10, 0.38));
  const Box r2 = reach_box(decomposition(m, 1), q2);
  ExpectNear(r2.lo, Eigen::Vector2d(0.32, 0.04));
  ExpectNear(r2.hi, Eigen::Vector2d(0.65, 0.16));
}

GTEST_TEST(ReachBoxTest, DegenerateBoxIsImagePoint) {
  const Mdp m = Example1();
  const Eigen::Vector2d x(0.3, 0.1);
  const Box r = reach_box(decomposition(m, 1), Box::point(x));
  const Eigen::VectorXd fx = reduce(belief_update(m, 1, lift(x)));
  ExpectNear(r.lo, fx);
  ExpectNear(r.hi, fx);
}

GTEST_TEST(ReachBoxTest, ClipClampsToUnitInterval) {
  const Mdp m = Example1();
  const Box whole(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1));
  const Box raw = reach_box(decomposition(m, 1), whole);
  EXPECT_LT(raw.lo.minCoeff(), 0.0);
  const Box clipped = reach_box(decomposition(m, 1), whole, true);
  EXPECT_GE(clipped.lo.minCoeff(), 0.0);
  EXPECT_LE(clipped.hi.maxCoeff(), 1.0);
  EXPECT_TRUE(clipped.valid());
}

// The mixed-monotone axioms and the two-corner bound, on random models.
GTEST_TEST(MixedMonotoneTest, RandomProperties) {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 3 + trial % 2;
    const Mdp m = canonical_reorder(test::RandomModel(rng, {.num_states = n})).model;
    const int a = trial % m.num_actions();
    const auto d = decomposition(m, a);
    EXPECT_TRUE((d.a1.array() >= 0).all() && (d.a2.array() >= 0).all() && (d.b.array() >= 0).all());

    const Eigen::VectorXd x = test::RandomReducedBelief(n - 1, rng);
    ExpectNear(decomp_eval(d, x, x), reduce(belief_update(m, a, lift(x))));
    EXPECT_NEAR(belief_update(m, a, lift(x)).sum(), 1.0, kTol);

    const Eigen::VectorXd y = test::RandomReducedBelief(n - 1, rng);
    Eigen::VectorXd bump(n - 1);
    for (int i = 0; i < n - 1; ++i) bump(i) = u(rng) * 0.1;
    const Eigen::VectorXd x2 = x + bump;
    EXPECT_TRUE(((decomp_eval(d, x, y) - decomp_eval(d, x2, y)).array() <= kTol).all());
    const Eigen::VectorXd y2 = y + bump;
    EXPECT_TRUE(((decomp_eval(d, x, y2) - decomp_eval(d, x, y)).array() <= kTol).all());

    // A box around x, then a point of the box inside the simplex.
    Eigen::VectorXd lo(n - 1), hi(n - 1);
    for (int i = 0; i < n - 1; ++i) {
      lo(i) = std::max(0.0, x(i) - 0.2 * u(rng));
      hi(i) = std::min(1.0, x(i) + 0.2 * u(rng));
    }
    const Box box(lo, hi);
    const Box r = reach_box(d, box);
    for (int k = 0; k < 20; ++k) {
      Eigen::VectorXd p(n - 1);
      for (int i = 0; i < n - 1; ++i) p(i) = lo(i) + u(rng) * (hi(i) - lo(i));
      if (!in_reduced_simplex(p)) continue;
      EXPECT_TRUE(r.contains(reduce(belief_update(m, a, lift(p))), kTol));
    }
  }
}

GTEST_TEST(InReducedSimplexTest, Boundaries) {
  EXPECT_TRUE(in_reduced_simplex(Eigen::Vector2d(0.5, 0.5)));
  EXPECT_FALSE(in_reduced_simplex(Eigen::Vector2d(0.6, 0.5)));
  EXPECT_FALSE(in_reduced_simplex(Eigen::Vector2d(-1e-9, 0.5)));
  EXPECT_TRUE(in_reduced_simplex(Eigen::Vector2d(-1e-9, 0.5), 1e-8));
}

}  // namespace
}  // namespace opac
