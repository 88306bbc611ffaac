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

// Brute-force reference computations. Nothing here calls into the engine's
// implementation paths; tests and `vaas selfcheck` compare the two.

#ifndef VAAS_ORACLES_HPP_
#define VAAS_ORACLES_HPP_

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "vaas/core.hpp"

namespace vaas::oracle {

// Every pair (i, j) of the grid is visited; j counts as a neighbour when it
// is a distinct cell within Chebyshev distance 1 (Manhattan 1 when
// eight_connected is false). Cosines are accumulated with explicit loops.
Matrix<double> patch_scores(const Matrix<double>& embeddings, Index rows, Index cols,
                            bool eight_connected, bool clamp_negative);

// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h at the given coordinates.
std::vector<double> central_difference(const std::function<double(const Vector<double>&)>& f,
                                       const Vector<double>& x, double h,
                                       const std::vector<Index>& coords);

// |a - b| / max(|a|, |b|); zero when both are below 1e-12.
double relative_error(double a, double b);

struct Counts {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

// Whole-array reductions over the indicator images.
Counts count_pixels(const Mask& pred, const Mask& truth);

// O(n^2) pairwise comparison, ties counted 1/2.
double pairwise_auc(const std::vector<std::pair<double, bool>>& scored);

// Two-pass mean / population std accumulated in long double.
std::pair<double, double> moments(const Matrix<double>& values);

// Smallest sample value v with at least percent% of the samples <= v.
double nearest_rank_percentile(std::vector<double> values, int percent);

// Bilinear interpolation of src at continuous source coordinates (y, x),
// clamped to the grid.
double bilinear_at(const Matrix<double>& src, double y, double x);

}  // namespace vaas::oracle

#endif  // VAAS_ORACLES_HPP_
