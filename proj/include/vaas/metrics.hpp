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

// Confusion counts, precision/recall/F1/IoU and rank AUC.
//
// 0/0 convention: when neither the ground truth nor the prediction contains
// a positive, every metric is 1 (a correct "nothing tampered" call). When
// positives exist on either side but tp = 0, the undefined ratios are 0.

#ifndef VAAS_METRICS_HPP_
#define VAAS_METRICS_HPP_

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "vaas/core.hpp"

namespace vaas {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) { return a += b; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double iou = 0.0;
};

template <typename DerivedA, typename DerivedB>
ConfusionCounts confusion(const Eigen::MatrixBase<DerivedA>& pred, const Eigen::MatrixBase<DerivedB>& gt) {
  if (pred.rows() != gt.rows() || pred.cols() != gt.cols()) {
    throw ValidationError("confusion: mask shapes differ");
  }
  ConfusionCounts c;
  for (Index r = 0; r < pred.rows(); ++r) {
    for (Index col = 0; col < pred.cols(); ++col) {
      const auto p = pred(r, col);
      const auto g = gt(r, col);
      if ((p != 0 && p != 1) || (g != 0 && g != 1)) throw ValidationError("confusion: mask is not binary");
      if (p == 1) {
        (g == 1 ? c.tp : c.fp) += 1;
      } else {
        (g == 1 ? c.fn : c.tn) += 1;
      }
    }
  }
  return c;
}

inline Metrics metrics(const ConfusionCounts& c) {
  const auto tp = static_cast<double>(c.tp);
  const auto fp = static_cast<double>(c.fp);
  const auto fn = static_cast<double>(c.fn);
  if (c.tp + c.fp + c.fn == 0) return {1.0, 1.0, 1.0, 1.0};
  Metrics m;
  m.precision = c.tp + c.fp == 0 ? 0.0 : tp / (tp + fp);
  m.recall = c.tp + c.fn == 0 ? 0.0 : tp / (tp + fn);
  // Dice form of 2pr/(p+r); identical in exact arithmetic, one rounding here.
  m.f1 = 2.0 * tp / (2.0 * tp + fp + fn);
  m.iou = tp / (tp + fp + fn);
  return m;
}

// Probability that a positive outscores a negative, ties counted as 1/2,
// via average ranks (Mann-Whitney U). Throws when a class is missing.
inline double detection_auc(std::span<const std::pair<double, bool>> scored) {
  std::vector<std::pair<double, bool>> v(scored.begin(), scored.end());
  std::sort(v.begin(), v.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double n_pos = 0.0;
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j].first == v[i].first) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (v[k].second) {
        n_pos += 1.0;
        rank_sum += avg_rank;
      }
    }
    i = j;
  }
  const double n_neg = static_cast<double>(v.size()) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0) throw ValidationError("detection_auc needs both labels");
  return (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

}  // namespace vaas

#endif  // VAAS_METRICS_HPP_
