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

// Observer belief dynamics and its mixed-monotone interval bounds.
//
// A belief b over N states evolves as b' = H_a b. Dropping the last
// coordinate (x = b[0..N-2], b[N-1] = 1 - sum(x)) gives the affine map
//
//   F_a(x) = A1 x - A2 x + B,
//
// with A1 the upper-left (N-1)x(N-1) block of H_a, B the first N-1 entries
// of H_a's last column and A2 = B * 1^T. All three are nonnegative, so
// f(x, y) = A1 x - A2 y + B is increasing in x and decreasing in y and
// F_a([lo, hi]) is contained in [f(lo, hi), f(hi, lo)].

#include <algorithm>
#include <stdexcept>

#include <Eigen/Dense>

#include "opac/model.h"

namespace opac {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Axis-aligned box [lo, hi] in reduced belief coordinates.
template <typename Scalar>
struct IntervalBox {
  VectorX<Scalar> lo;
  VectorX<Scalar> hi;

  IntervalBox() = default;
  IntervalBox(VectorX<Scalar> lo_in, VectorX<Scalar> hi_in)
      : lo(std::move(lo_in)), hi(std::move(hi_in)) {
    if (lo.size() != hi.size()) throw std::invalid_argument("IntervalBox: dimension mismatch");
  }
  static IntervalBox point(const VectorX<Scalar>& x) { return IntervalBox(x, x); }

  Eigen::Index dim() const { return lo.size(); }
  bool valid() const { return lo.size() == hi.size() && (lo.array() <= hi.array()).all(); }
  bool contains(const VectorX<Scalar>& x, Scalar tol = Scalar(0)) const {
    return (x.array() >= lo.array() - tol).all() && (x.array() <= hi.array() + tol).all();
  }
  bool contains(const IntervalBox& inner, Scalar tol = Scalar(0)) const {
    return (inner.lo.array() >= lo.array() - tol).all() &&
           (inner.hi.array() <= hi.array() + tol).all();
  }
};

using Box = IntervalBox<double>;

/// Per-action decomposition f(x, y) = a1 x - a2 y + b of the reduced map.
template <typename Scalar>
struct AffineDecomposition {
  MatrixX<Scalar> a1;
  MatrixX<Scalar> a2;
  VectorX<Scalar> b;
  int action = -1;

  Eigen::Index dim() const { return b.size(); }
  /// F(x) = f(x, x) = (a1 - a2) x + b.
  MatrixX<Scalar> linear_part() const { return a1 - a2; }
};

/// b' = H b.
template <typename DerivedH, typename DerivedB>
auto belief_update(const Eigen::MatrixBase<DerivedH>& h, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedB::Scalar;
  if (h.cols() != b.size()) throw std::invalid_argument("belief_update: dimension mismatch");
  return VectorX<Scalar>(h * b);
}

inline Eigen::VectorXd belief_update(const Mdp& m, int action, const Eigen::VectorXd& b) {
  if (action < 0 || action >= m.num_actions()) {
    throw std::out_of_range("belief_update: unknown action");
  }
  return belief_update(m.trans[action], b);
}

/// Drops the last coordinate.
template <typename Derived>
auto reduce(const Eigen::MatrixBase<Derived>& b) {
  using Scalar = typename Derived::Scalar;
  if (b.size() < 1) throw std::invalid_argument("reduce: empty belief");
  return VectorX<Scalar>(b.head(b.size() - 1));
}

/// Appends 1 - sum(x).
template <typename Derived>
auto lift(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  VectorX<Scalar> b(x.size() + 1);
  b.head(x.size()) = x;
  b(x.size()) = Scalar(1) - x.sum();
  return b;
}

/// Splits a column-stochastic H into the mixed-monotone decomposition.
template <typename Derived>
AffineDecomposition<typename Derived::Scalar> decomposition(const Eigen::MatrixBase<Derived>& h,
                                                            int action = -1) {
  using Scalar = typename Derived::Scalar;
  if (h.rows() != h.cols() || h.rows() < 1) {
    throw std::invalid_argument("decomposition: matrix must be square and nonempty");
  }
  const Eigen::Index n = h.rows() - 1;
  AffineDecomposition<Scalar> d;
  d.action = action;
  d.a1 = h.topLeftCorner(n, n);
  d.b = h.col(n).head(n);
  d.a2 = d.b.replicate(1, n);
  return d;
}

/// Decomposition for one action of a canonically ordered model.
inline AffineDecomposition<double> decomposition(const Mdp& m, int action) {
  if (action < 0 || action >= m.num_actions()) {
    throw std::out_of_range("decomposition: unknown action");
  }
  return decomposition(m.trans[action], action);
}

/// f(x, y) = a1 x - a2 y + b, evaluated exactly as written.
template <typename Scalar, typename DerivedX, typename DerivedY>
VectorX<Scalar> decomp_eval(const AffineDecomposition<Scalar>& d,
                            const Eigen::MatrixBase<DerivedX>& x,
                            const Eigen::MatrixBase<DerivedY>& y) {
  if (x.size() != d.dim() || y.size() != d.dim()) {
    throw std::invalid_argument("decomp_eval: dimension mismatch");
  }
  return d.a1 * x - d.a2 * y + d.b;
}

/// Two-corner over-approximation [f(lo, hi), f(hi, lo)] of F(box).
///
/// With clip, each coordinate is clamped to [0, 1]; the simplex constraint
/// sum(x) <= 1 is left to the overlap tests of the abstraction.
template <typename Scalar>
IntervalBox<Scalar> reach_box(const AffineDecomposition<Scalar>& d, const IntervalBox<Scalar>& box,
                              bool clip = false) {
  IntervalBox<Scalar> out(decomp_eval(d, box.lo, box.hi), decomp_eval(d, box.hi, box.lo));
  if (clip) {
    out.lo = out.lo.cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
    out.hi = out.hi.cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
  }
  return out;
}

/// True when x is in the reduced simplex {x >= 0, sum(x) <= 1} up to tol.
template <typename Derived>
bool in_reduced_simplex(const Eigen::MatrixBase<Derived>& x,
                        typename Derived::Scalar tol = typename Derived::Scalar(0)) {
  return (x.array() >= -tol).all() && x.sum() <= typename Derived::Scalar(1) + tol;
}

}  // namespace opac
