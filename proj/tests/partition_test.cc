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

#include "opac/partition.h"

#include <random>

#include <gtest/gtest.h>

#include "test_support.h"

namespace opac {
namespace {

using test::Example1;

Box MakeBox(double lo0, double lo1, double hi0, double hi1) {
  return Box(Eigen::Vector2d(lo0, lo1), Eigen::Vector2d(hi0, hi1));
}

Mdp TwoStateModel(double lambda) {
  Mdp m;
  m.states = {"secret", "public"};
  m.actions = {"a"};
  m.pi0 = Eigen::Vector2d(0.75, 0.25);
  Eigen::Matrix2d h;
  h << 0.5, 0.5, 0.5, 0.5;
  m.trans = {h};
  m.secret = {0};
  m.lambda = lambda;
  return m;
}

const std::vector<double> kFigureWidths{0.2, 0.2};

GTEST_TEST(ClassifyCellTest, Example1Cells) {
  const Mdp m = Example1();
  EXPECT_EQ(classify_cell(MakeBox(0, 0.6, 0.2, 0.8), m), CellStatus::kBad);
  EXPECT_EQ(classify_cell(MakeBox(0.2, 0, 0.4, 0.2), m), CellStatus::kSafe);
  EXPECT_EQ(classify_cell(MakeBox(0.8, 0.2, 1.0, 0.4), m), CellStatus::kExcluded);
  EXPECT_DOUBLE_EQ(secret_mass_upper(MakeBox(0, 0.6, 0.2, 0.8), m), 1.0);
  // Corner mass exactly at the threshold is compliant.
  EXPECT_EQ(classify_cell(MakeBox(0.4, 0.0, 0.6, 0.2), m), CellStatus::kSafe);
}

GTEST_TEST(ClassifyCellTest, MonotoneUnderEnlargement) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const Mdp m = canonical_reorder(test::RandomModel(rng, {.num_states = 3 + trial % 2})).model;
    const int d = m.num_states() - 1;
    Eigen::VectorXd lo(d), hi(d), lo2(d), hi2(d);
    for (int i = 0; i < d; ++i) {
      lo(i) = 0.5 * u(rng);
      hi(i) = lo(i) + 0.5 * u(rng);
      lo2(i) = lo(i) * u(rng);
      hi2(i) = hi(i) + (1.0 - hi(i)) * u(rng);
    }
    if (classify_cell(Box(lo, hi), m) == CellStatus::kBad) {
      EXPECT_EQ(classify_cell(Box(lo2, hi2), m), CellStatus::kBad);
    }
  }
}

GTEST_TEST(BuildGridTest, Example1Figure) {
  const Partition dut = build_grid(kFigureWidths, Example1());
  EXPECT_EQ(dut.num_cells(), 25);
  EXPECT_EQ(dut.dim, 2);
  EXPECT_EQ(dut.count(CellStatus::kExcluded), 10);
  EXPECT_EQ(dut.count(CellStatus::kBad), 9);
  EXPECT_EQ(dut.count(CellStatus::kSafe), 6);
  for (int i = 0; i < dut.num_cells(); ++i) EXPECT_EQ(dut.cell(i).id, i);
  // The six compliant cells: three in the first column, two in the
  // second, one in the third.
  std::vector<std::pair<int, int>> safe;
  for (const auto& c : dut.cells) {
    if (c.status == CellStatus::kSafe) {
      safe.emplace_back(static_cast<int>(std::lround(c.box.lo(0) / 0.2)),
                        static_cast<int>(std::lround(c.box.lo(1) / 0.2)));
    }
  }
  EXPECT_EQ(safe, (std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {2, 0}}));
}

GTEST_TEST(BuildGridTest, SingleCell) {
  const std::vector<double> widths{1.0};
  const Partition dut = build_grid(widths, TwoStateModel(1.0));
  ASSERT_EQ(dut.num_cells(), 1);
  EXPECT_EQ(dut.cell(0).status, CellStatus::kSafe);
  EXPECT_EQ(dut.cell(0).box.lo(0), 0.0);
  EXPECT_EQ(dut.cell(0).box.hi(0), 1.0);
}

GTEST_TEST(BuildGridTest, ZeroThreshold) {
  Mdp m = Example1();
  m.lambda = 0.0;
  const Partition dut = build_grid(kFigureWidths, m);
  EXPECT_EQ(dut.count(CellStatus::kSafe), 0);
  EXPECT_EQ(dut.count(CellStatus::kBad), 15);
}

GTEST_TEST(BuildGridTest, TruncatedLastCell) {
  const std::vector<double> widths{0.3};
  const Partition dut = build_grid(widths, TwoStateModel(0.8));
  ASSERT_EQ(dut.num_cells(), 4);
  EXPECT_NEAR(dut.cell(3).box.lo(0), 0.9, 1e-12);
  EXPECT_EQ(dut.cell(3).box.hi(0), 1.0);
  EXPECT_EQ(dut.cell(3).status, CellStatus::kBad);
}

GTEST_TEST(BuildGridTest, CoversTheSimplex) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<std::vector<double>> grids{{0.2, 0.2}, {0.3, 0.15}, {0.25, 0.4, 0.3}};
  for (const auto& widths : grids) {
    Mdp m = canonical_reorder(test::RandomModel(rng, {.num_states = static_cast<int>(widths.size()) + 1}))
                .model;
    const Partition p = build_grid(widths, m);
    for (const auto& c : p.cells) {
      // The lower corner of a usable cell is a point of X.
      if (c.status != CellStatus::kExcluded) {
        EXPECT_TRUE(in_reduced_simplex(c.box.lo, 1e-12));
      }
    }
    // Monte Carlo over the unit cube: every point of X lies in some usable
    // cell, so the covered fraction equals the simplex fraction exactly.
    int in_x = 0, covered = 0;
    for (int k = 0; k < 20000; ++k) {
      Eigen::VectorXd x(p.dim);
      for (int i = 0; i < p.dim; ++i) x(i) = u(rng);
      if (!in_reduced_simplex(x)) continue;
      ++in_x;
      for (const auto& c : p.cells) {
        if (c.status != CellStatus::kExcluded && c.box.contains(x)) {
          ++covered;
          break;
        }
      }
    }
    EXPECT_EQ(covered, in_x);
  }
}

GTEST_TEST(LocateCellTest, Example1Points) {
  const Partition p = build_grid(kFigureWidths, Example1());
  auto box_of = [&](double x0, double x1) { return p.cell(locate_cell(Eigen::Vector2d(x0, x1), p)).box; };
  EXPECT_EQ(box_of(0.3, 0.1).lo, Eigen::Vector2d(0.2, 0.0));
  EXPECT_EQ(locate_cell(Eigen::Vector2d(0.3, 0.1), p), 5);
  EXPECT_EQ(locate_cell(Eigen::Vector2d(0, 0), p), 0);
  EXPECT_NEAR((box_of(0.2, 0.2).lo - Eigen::Vector2d(0.2, 0.2)).norm(), 0.0, 1e-12);
  // Outer boundary points.
  EXPECT_NEAR(box_of(1.0, 0.0).lo(0), 0.8, 1e-12);
  EXPECT_NEAR(box_of(0.0, 1.0).lo(1), 0.8, 1e-12);
  const int on_diagonal = locate_cell(Eigen::Vector2d(0.6, 0.4), p);
  EXPECT_NE(p.cell(on_diagonal).status, CellStatus::kExcluded);
  EXPECT_TRUE(p.cell(on_diagonal).box.contains(Eigen::Vector2d(0.6, 0.4), 1e-12));
  EXPECT_THROW(locate_cell(Eigen::Vector2d(1.1, 0.0), p), std::out_of_range);
  EXPECT_THROW(locate_cell(Eigen::Vector2d(-0.1, 0.0), p), std::out_of_range);
}

GTEST_TEST(LocateCellTest, TotalAndConsistentOnX) {
  std::mt19937_64 rng(17);
  const std::vector<double> widths{0.15, 0.25, 0.2};
  const Mdp m = canonical_reorder(test::RandomModel(rng, {.num_states = 4})).model;
  const Partition p = build_grid(widths, m);
  for (int k = 0; k < 5000; ++k) {
    const Eigen::VectorXd x = test::RandomReducedBelief(3, rng);
    const int id = locate_cell(x, p);
    EXPECT_NE(p.cell(id).status, CellStatus::kExcluded);
    EXPECT_TRUE(p.cell(id).box.contains(x));
    // Half-open membership makes the answer unique among usable cells.
    int owners = 0;
    for (const auto& c : p.cells) {
      owners += c.status != CellStatus::kExcluded && (x.array() >= c.box.lo.array()).all() &&
                (x.array() < c.box.hi.array()).all();
    }
    EXPECT_EQ(owners, 1);
  }
}

GTEST_TEST(RefineInitialTest, Example1Unchanged) {
  const Mdp m = Example1();
  const Partition p = build_grid(kFigureWidths, m);
  const Partition dut = refine_initial(p, reduce(m.pi0), m, 8);
  ASSERT_EQ(dut.num_cells(), p.num_cells());
  for (int i = 0; i < p.num_cells(); ++i) EXPECT_EQ(dut.cell(i).box.lo, p.cell(i).box.lo);
}

// Independent 1-D bisection: halve the interval holding x0 (half-open)
// until its upper end, the secret-mass corner, is within the threshold.
std::pair<double, int> BisectOracle(double lo, double hi, double x0, double lambda) {
  int steps = 0;
  while (hi > lambda) {
    const double mid = 0.5 * (lo + hi);
    if (x0 < mid) {
      hi = mid;
    } else {
      lo = mid;
    }
    ++steps;
  }
  return {hi, steps};
}

GTEST_TEST(RefineInitialTest, TwoStateBisection) {
  const Mdp m = TwoStateModel(0.8);
  const std::vector<double> widths{0.3};
  const Partition p = build_grid(widths, m);
  const Eigen::VectorXd x0 = reduce(m.pi0);
  const PartitionCell& start = p.cell(locate_cell(x0, p));
  ASSERT_EQ(start.status, CellStatus::kBad);
  ASSERT_NEAR(start.box.hi(0), 0.9, 1e-12);

  const auto [corner, steps] = BisectOracle(start.box.lo(0), start.box.hi(0), x0(0), m.lambda);
  ASSERT_GE(steps, 1);
  const Partition dut = refine_initial(p, x0, m, 8);
  const PartitionCell& cell = dut.cell(locate_cell(x0, dut));
  EXPECT_EQ(cell.status, CellStatus::kSafe);
  EXPECT_EQ(cell.box.hi(0), corner);
  EXPECT_LE(cell.box.hi(0), 0.8);
  EXPECT_EQ(dut.num_cells(), p.num_cells() + steps);
  for (int i = 0; i < dut.num_cells(); ++i) {
    EXPECT_EQ(dut.cell(i).id, i);
    if (i > 0) {
      EXPECT_EQ(dut.cell(i).box.lo(0), dut.cell(i - 1).box.hi(0));
    }
  }

  EXPECT_THROW(refine_initial(p, x0, m, 0), RefinementError);
  EXPECT_THROW(refine_initial(p, x0, m, steps - 1), RefinementError);
}

GTEST_TEST(RefineInitialTest, TwoDimensionalKeepsATiling) {
  Mdp m = Example1();
  m.lambda = 0.5;
  const Partition p = build_grid(kFigureWidths, m);
  const Eigen::VectorXd x0 = reduce(m.pi0);
  ASSERT_EQ(p.cell(locate_cell(x0, p)).status, CellStatus::kBad);
  const Partition dut = refine_initial(p, x0, m, 8);
  EXPECT_EQ(dut.cell(locate_cell(x0, dut)).status, CellStatus::kSafe);
  double area = 0.0;
  for (const auto& c : dut.cells) area += (c.box.hi - c.box.lo).prod();
  EXPECT_NEAR(area, 1.0, 1e-12);
  for (int i = 0; i < dut.num_cells(); ++i) {
    EXPECT_EQ(dut.cell(i).status, classify_cell(dut.cell(i).box, m));
    for (int j = i + 1; j < dut.num_cells(); ++j) {
      const Box& a = dut.cell(i).box;
      const Box& b = dut.cell(j).box;
      const bool interiors_meet = (a.lo.cwiseMax(b.lo).array() < a.hi.cwiseMin(b.hi).array() - 1e-12).all();
      EXPECT_FALSE(interiors_meet) << i << " " << j;
    }
  }
}

}  // namespace
}  // namespace opac
