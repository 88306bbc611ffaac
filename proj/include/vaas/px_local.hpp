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

// Local anomaly detection by patch self-consistency.
//
// Each patch embedding is compared with its spatial neighbours by cosine
// similarity; a patch that disagrees with its surroundings scores high:
//
//   S_P(i) = 1 - (1/N) * sum_{j in N(i)} Sim(P_i, P_j),   S_P = mean_i S_P(i)
//
// Neighbourhoods are truncated at the grid border. With clamping on, each
// similarity is clamped to [0,1] first so S_P(i) stays in [0,1].

#ifndef VAAS_PX_LOCAL_HPP_
#define VAAS_PX_LOCAL_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "vaas/core.hpp"
#include "vaas/features.hpp"
#include "vaas/fx_global.hpp"
#include "vaas/resample.hpp"

namespace vaas {

enum class Neighbourhood { kFour = 4, kEight = 8 };

struct PatchGridConfig {
  int patch_size = 32;
  Neighbourhood neighbourhood = Neighbourhood::kEight;
  bool clamp_negative = true;
  double binarise_threshold = 0.5;

  void validate() const {
    if (patch_size < 1) throw ValidationError("patch size must be >= 1");
    if (!(binarise_threshold > 0.0 && binarise_threshold < 1.0)) {
      throw ValidationError("binarise threshold must lie in (0,1)");
    }
  }
};

struct LocalResult {
  Matrix<double> per_patch;  // [rows, cols], S_P(i)
  double s_p = 0.0;
  Matrix<double> map;  // per_patch bilinearly upsampled to image resolution
  Mask mask;           // map >= binarise_threshold
};

template <typename DerivedA, typename DerivedB>
double cosine_sim(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) throw ValidationError("cosine_sim: length mismatch");
  const double na = a.template cast<double>().norm();
  const double nb = b.template cast<double>().norm();
  if (!(na > 0.0) || !(nb > 0.0)) throw DataError("zero-norm embedding");
  const double dot = a.template cast<double>().cwiseProduct(b.template cast<double>()).sum();
  return std::clamp(dot / (na * nb), -1.0, 1.0);
}

// In-bounds neighbours of patch `index` in row-major order of offsets.
inline std::vector<Index> grid_neighbours(Index rows, Index cols, Index index, Neighbourhood hood) {
  std::vector<Index> out;
  const Index r = index / cols;
  const Index c = index % cols;
  for (Index dr = -1; dr <= 1; ++dr) {
    for (Index dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      if (hood == Neighbourhood::kFour && dr != 0 && dc != 0) continue;
      const Index nr = r + dr;
      const Index nc = c + dc;
      if (nr >= 0 && nr < rows && nc >= 0 && nc < cols) out.push_back(nr * cols + nc);
    }
  }
  return out;
}

namespace detail {

inline void check_grid(Index embedding_rows, Index rows, Index cols) {
  if (rows < 1 || cols < 1 || rows * cols != embedding_rows) {
    throw ValidationError("patch grid " + std::to_string(rows) + "x" + std::to_string(cols) +
                          " does not match " + std::to_string(embedding_rows) + " embeddings");
  }
  if (rows * cols < 2) throw ValidationError("single-patch grid has no neighbours");
}

inline double similarity_term(double sim, bool clamp_negative) {
  return clamp_negative ? std::clamp(sim, 0.0, 1.0) : sim;
}

}  // namespace detail

// Score of a single patch, evaluated directly from the raw embeddings.
template <typename Derived>
double patch_anomaly(const Eigen::MatrixBase<Derived>& embeddings, Index rows, Index cols, Index index,
                     const PatchGridConfig& cfg) {
  detail::check_grid(embeddings.rows(), rows, cols);
  if (index < 0 || index >= rows * cols) throw ValidationError("patch index out of range");
  const auto hood = grid_neighbours(rows, cols, index, cfg.neighbourhood);
  double sum = 0.0;
  for (Index j : hood) {
    sum += detail::similarity_term(cosine_sim(embeddings.row(index), embeddings.row(j)),
                                   cfg.clamp_negative);
  }
  return 1.0 - sum / static_cast<double>(hood.size());
}

// All patch scores at once: rows are normalised a single time and every
// neighbouring pair's similarity is computed once and shared.
template <typename Derived>
Matrix<double> patch_anomaly_grid(const Eigen::MatrixBase<Derived>& embeddings, Index rows, Index cols,
                                  const PatchGridConfig& cfg) {
  detail::check_grid(embeddings.rows(), rows, cols);
  Matrix<double> unit = embeddings.template cast<double>();
  for (Index i = 0; i < unit.rows(); ++i) {
    const double n = unit.row(i).norm();
    if (!(n > 0.0)) throw DataError("zero-norm embedding at patch " + std::to_string(i));
    unit.row(i) /= n;
  }

  // Forward half of the neighbourhood; the reverse direction reuses the value.
  std::vector<std::array<Index, 2>> forward = {{0, 1}, {1, 0}};
  if (cfg.neighbourhood == Neighbourhood::kEight) {
    forward.push_back({1, 1});
    forward.push_back({1, -1});
  }

  Matrix<double> sum = Matrix<double>::Zero(rows, cols);
  Matrix<double> count = Matrix<double>::Zero(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      for (const auto& [dr, dc] : forward) {
        const Index nr = r + dr;
        const Index nc = c + dc;
        if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
        const double sim = std::clamp(unit.row(r * cols + c).dot(unit.row(nr * cols + nc)), -1.0, 1.0);
        const double term = detail::similarity_term(sim, cfg.clamp_negative);
        sum(r, c) += term;
        sum(nr, nc) += term;
        count(r, c) += 1.0;
        count(nr, nc) += 1.0;
      }
    }
  }
  return (1.0 - (sum.array() / count.array())).matrix();
}

template <typename Derived>
Mask binarise(const Eigen::MatrixBase<Derived>& map, double threshold) {
  return (map.array() >= threshold).template cast<std::uint8_t>().matrix();
}

template <typename Derived>
LocalResult local_score(const Eigen::MatrixBase<Derived>& embeddings, Index rows, Index cols,
                        const PatchGridConfig& cfg, Index image_rows, Index image_cols) {
  cfg.validate();
  LocalResult out;
  out.per_patch = patch_anomaly_grid(embeddings, rows, cols, cfg);
  CompensatedSum total;
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) total.add(out.per_patch(r, c));
  }
  out.s_p = total.value() / static_cast<double>(rows * cols);
  out.map = resize_bilinear(out.per_patch, image_rows, image_cols);
  out.mask = binarise(out.map, cfg.binarise_threshold);
  return out;
}

inline LocalResult local_score(const FeatureBundle& bundle, const PatchGridConfig& cfg) {
  return local_score(as_matrix(bundle.embeddings), bundle.grid_rows, bundle.grid_cols, cfg,
                     bundle.image_rows, bundle.image_cols);
}

// Nearest-neighbour resampling of a binary mask; rejects non-binary input.
inline Mask resize_mask_nn(const Mask& mask, Index rows, Index cols) {
  if ((mask.array() > 1).any()) throw ValidationError("mask is not binary");
  return resize_nearest(mask, rows, cols);
}

}  // namespace vaas

#endif  // VAAS_PX_LOCAL_HPP_
