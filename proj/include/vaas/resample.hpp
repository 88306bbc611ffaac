/*
 * Copyright 2026 The VAAS Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Grid resampling on pixel centres (align-corners = false): output pixel o of
// N maps to source coordinate (o + 0.5) * n / N - 0.5. Bilinear sampling
// clamps to the border; nearest-neighbour picks the source cell containing
// the output pixel centre, computed in exact integer arithmetic.

#ifndef VAAS_RESAMPLE_HPP_
#define VAAS_RESAMPLE_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "vaas/core.hpp"

namespace vaas {
namespace detail {

struct LinearTap {
  Index lo;
  Index hi;
  double t;  // weight of hi
};

inline std::vector<LinearTap> linear_taps(Index src_n, Index dst_n) {
  std::vector<LinearTap> taps(static_cast<std::size_t>(dst_n));
  const double scale = static_cast<double>(src_n) / static_cast<double>(dst_n);
  for (Index o = 0; o < dst_n; ++o) {
    double x = (static_cast<double>(o) + 0.5) * scale - 0.5;
    x = std::clamp(x, 0.0, static_cast<double>(src_n - 1));
    const auto lo = static_cast<Index>(std::floor(x));
    const Index hi = std::min(lo + 1, src_n - 1);
    taps[static_cast<std::size_t>(o)] = {lo, hi, x - static_cast<double>(lo)};
  }
  return taps;
}

inline Index nearest_index(Index o, Index src_n, Index dst_n) {
  return std::min((2 * o + 1) * src_n / (2 * dst_n), src_n - 1);
}

}  // namespace detail

template <typename Derived>
Matrix<typename Derived::Scalar> resize_bilinear(const Eigen::MatrixBase<Derived>& src, Index rows,
                                                 Index cols) {
  using Scalar = typename Derived::Scalar;
  if (src.size() == 0 || rows < 1 || cols < 1) throw ValidationError("resize of an empty grid");
  const auto ry = detail::linear_taps(src.rows(), rows);
  const auto rx = detail::linear_taps(src.cols(), cols);
  Matrix<Scalar> out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& ty = ry[static_cast<std::size_t>(r)];
    for (Index c = 0; c < cols; ++c) {
      const auto& tx = rx[static_cast<std::size_t>(c)];
      const double top = (1.0 - tx.t) * static_cast<double>(src(ty.lo, tx.lo)) +
                         tx.t * static_cast<double>(src(ty.lo, tx.hi));
      const double bottom = (1.0 - tx.t) * static_cast<double>(src(ty.hi, tx.lo)) +
                            tx.t * static_cast<double>(src(ty.hi, tx.hi));
      out(r, c) = static_cast<Scalar>((1.0 - ty.t) * top + ty.t * bottom);
    }
  }
  return out;
}

template <typename Derived>
Matrix<typename Derived::Scalar> resize_nearest(const Eigen::MatrixBase<Derived>& src, Index rows,
                                                Index cols) {
  if (src.size() == 0 || rows < 1 || cols < 1) throw ValidationError("resize of an empty grid");
  Matrix<typename Derived::Scalar> out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const Index sr = detail::nearest_index(r, src.rows(), rows);
    for (Index c = 0; c < cols; ++c) {
      out(r, c) = src(sr, detail::nearest_index(c, src.cols(), cols));
    }
  }
  return out;
}

}  // namespace vaas

#endif  // VAAS_RESAMPLE_HPP_
