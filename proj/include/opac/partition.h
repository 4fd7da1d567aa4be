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

#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "opac/belief.h"
#include "opac/model.h"

namespace opac {

enum class CellStatus { kSafe, kBad, kExcluded };

std::string_view to_string(CellStatus status);

struct PartitionCell {
  int id = -1;
  Box box;
  CellStatus status = CellStatus::kSafe;
};

/// Interval cells covering [0,1]^(N-1); cells with sum(lo) >= 1 are kept
/// (marked excluded) for plotting only.
struct Partition {
  std::vector<PartitionCell> cells;
  std::vector<double> widths;
  int dim = 0;

  /// Cells are stored so that cells[i].id == i.
  const PartitionCell& cell(int id) const { return cells.at(id); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  int count(CellStatus status) const;
};

class RefinementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest secret mass attained on the box: sum over secret coordinates of hi.
/// Exact for full cells of a canonically ordered model.
double secret_mass_upper(const Box& box, const Mdp& m);

/// excluded if sum(lo) >= 1, else bad if the secret-mass upper corner is
/// strictly above lambda, else safe. Comparisons use kGeomTol slack so that
/// corners which are multiples of the grid width behave as if exact.
CellStatus classify_cell(const Box& box, const Mdp& m);

/// Uniform grid with one width per reduced dimension. A width that divides 1
/// (within tolerance) yields boundaries k/n; otherwise the last cell in that
/// dimension is truncated at 1. Cells are numbered with the first
/// dimension varying slowest.
Partition build_grid(std::span<const double> widths, const Mdp& m);

/// Cell whose half-open box [lo, hi) contains x. Points on the outer
/// boundary (a coordinate equal to 1, or sum(x) = 1 landing in an excluded
/// cell) go to the last non-excluded cell whose closed box contains them.
/// Throws std::out_of_range when x is outside [0,1]^(N-1).
int locate_cell(const Eigen::VectorXd& x, const Partition& p);

/// Bisects the cell containing x0 until it is safe. The split dimension is
/// the one whose x0-side half has the smallest secret-mass upper corner
/// (largest margin to the threshold); ties go to the lowest dimension.
/// Cells are renumbered so ids stay dense; the halves take the old cell's
/// position in the list. Throws RefinementError after max_depth bisections.
Partition refine_initial(Partition p, const Eigen::VectorXd& x0, const Mdp& m, int max_depth);

}  // namespace opac
