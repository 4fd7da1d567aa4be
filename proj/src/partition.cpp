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

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace opac {

std::string_view to_string(CellStatus status) {
  switch (status) {
    case CellStatus::kSafe:
      return "safe";
    case CellStatus::kBad:
      return "bad";
    case CellStatus::kExcluded:
      return "excluded";
  }
  return "?";
}

int Partition::count(CellStatus status) const {
  return static_cast<int>(std::count_if(cells.begin(), cells.end(),
                                        [&](const auto& c) { return c.status == status; }));
}

double secret_mass_upper(const Box& box, const Mdp& m) {
  double mass = 0.0;
  for (int s : m.secret) {
    if (s >= box.dim()) {
      throw std::invalid_argument("secret_mass_upper: model is not canonically ordered");
    }
    mass += box.hi(s);
  }
  return mass;
}

CellStatus classify_cell(const Box& box, const Mdp& m) {
  if (box.lo.sum() >= 1.0 - kGeomTol) return CellStatus::kExcluded;
  if (secret_mass_upper(box, m) > m.lambda + kGeomTol) return CellStatus::kBad;
  return CellStatus::kSafe;
}

namespace {

std::vector<double> axis_breaks(double width) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw std::invalid_argument(fmt::format("grid width must be positive, got {}", width));
  }
  std::vector<double> breaks;
  const double ratio = 1.0 / width;
  const double rounded = std::round(ratio);
  if (rounded >= 1.0 && std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) {
    const int n = static_cast<int>(rounded);
    for (int k = 0; k <= n; ++k) breaks.push_back(static_cast<double>(k) / n);
    return breaks;
  }
  for (int k = 0;; ++k) {
    const double v = k * width;
    if (v >= 1.0 - kGeomTol) break;
    breaks.push_back(v);
  }
  breaks.push_back(1.0);
  return breaks;
}

}  // namespace

Partition build_grid(std::span<const double> widths, const Mdp& m) {
  const int dim = m.num_states() - 1;
  if (static_cast<int>(widths.size()) != dim) {
    throw std::invalid_argument(
        fmt::format("build_grid: {} widths given for {} reduced dimensions", widths.size(), dim));
  }
  Partition p;
  p.dim = dim;
  p.widths.assign(widths.begin(), widths.end());

  std::vector<std::vector<double>> breaks;
  for (double w : widths) breaks.push_back(axis_breaks(w));

  // Odometer over per-dimension cell indices, last dimension fastest.
  std::vector<std::size_t> idx(dim, 0);
  while (true) {
    Eigen::VectorXd lo(dim), hi(dim);
    for (int d = 0; d < dim; ++d) {
      lo(d) = breaks[d][idx[d]];
      hi(d) = breaks[d][idx[d] + 1];
    }
    PartitionCell cell;
    cell.id = p.num_cells();
    cell.box = Box(lo, hi);
    cell.status = classify_cell(cell.box, m);
    p.cells.push_back(std::move(cell));

    int d = dim - 1;
    while (d >= 0 && ++idx[d] + 1 >= breaks[d].size()) idx[d--] = 0;
    if (d < 0) break;
  }
  return p;
}

int locate_cell(const Eigen::VectorXd& x, const Partition& p) {
  if (x.size() != p.dim) throw std::invalid_argument("locate_cell: dimension mismatch");
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    if (!(x(d) >= -kGeomTol && x(d) <= 1.0 + kGeomTol)) {
      throw std::out_of_range(fmt::format("locate_cell: coordinate {} = {} outside [0,1]", d, x(d)));
    }
  }
  for (const auto& c : p.cells) {
    const bool inside = (x.array() >= c.box.lo.array()).all() && (x.array() < c.box.hi.array()).all();
    if (inside && c.status != CellStatus::kExcluded) return c.id;
  }
  for (auto it = p.cells.rbegin(); it != p.cells.rend(); ++it) {
    if (it->status != CellStatus::kExcluded && it->box.contains(x, kGeomTol)) return it->id;
  }
  throw std::out_of_range("locate_cell: point lies in no usable cell");
}

Partition refine_initial(Partition p, const Eigen::VectorXd& x0, const Mdp& m, int max_depth) {
  for (int depth = 0;; ++depth) {
    const int id = locate_cell(x0, p);
    const PartitionCell& current = p.cell(id);
    if (current.status != CellStatus::kBad) return p;
    if (depth >= max_depth) {
      throw RefinementError(fmt::format(
          "initial belief still lies in a bad cell after {} bisections; the belief may be too "
          "close to the opacity threshold",
          max_depth));
    }

    double best_mass = 0.0;
    Box best_lower, best_upper;
    for (int d = 0; d < p.dim; ++d) {
      const double mid = 0.5 * (current.box.lo(d) + current.box.hi(d));
      Box lower = current.box, upper = current.box;
      lower.hi(d) = mid;
      upper.lo(d) = mid;
      const Box& side = x0(d) < mid ? lower : upper;
      const double mass = secret_mass_upper(side, m);
      if (d == 0 || mass < best_mass) {
        best_mass = mass;
        best_lower = lower;
        best_upper = upper;
      }
    }

    PartitionCell lo_cell{id, best_lower, classify_cell(best_lower, m)};
    PartitionCell hi_cell{id + 1, best_upper, classify_cell(best_upper, m)};
    p.cells[id] = lo_cell;
    p.cells.insert(p.cells.begin() + id + 1, hi_cell);
    for (int i = id + 2; i < p.num_cells(); ++i) p.cells[i].id = i;
  }
}

}  // namespace opac
