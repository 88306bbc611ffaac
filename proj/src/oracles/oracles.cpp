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

#include "vaas/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace vaas::oracle {

Matrix<double> patch_scores(const Matrix<double>& e, Index rows, Index cols, bool eight_connected,
                            bool clamp_negative) {
  const Index m = rows * cols;
  const Index d = e.cols();
  Matrix<double> out(rows, cols);
  for (Index i = 0; i < m; ++i) {
    double sum = 0.0;
    int count = 0;
    for (Index j = 0; j < m; ++j) {
      if (i == j) continue;
      const Index dr = std::abs(i / cols - j / cols);
      const Index dc = std::abs(i % cols - j % cols);
      const bool adjacent = eight_connected ? (dr <= 1 && dc <= 1) : (dr + dc == 1);
      if (!adjacent) continue;
      double dot = 0.0, ni = 0.0, nj = 0.0;
      for (Index k = 0; k < d; ++k) {
        dot += e(i, k) * e(j, k);
        ni += e(i, k) * e(i, k);
        nj += e(j, k) * e(j, k);
      }
      double sim = dot / (std::sqrt(ni) * std::sqrt(nj));
      if (clamp_negative) sim = std::min(1.0, std::max(0.0, sim));
      sum += sim;
      ++count;
    }
    out(i / cols, i % cols) = 1.0 - sum / count;
  }
  return out;
}

std::vector<double> central_difference(const std::function<double(const Vector<double>&)>& f,
                                       const Vector<double>& x, double h,
                                       const std::vector<Index>& coords) {
  std::vector<double> out;
  out.reserve(coords.size());
  for (Index i : coords) {
    Vector<double> up = x;
    Vector<double> down = x;
    up(i) += h;
    down(i) -= h;
    out.push_back((f(up) - f(down)) / (2.0 * h));
  }
  return out;
}

double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale < 1e-12) return 0.0;
  return std::abs(a - b) / scale;
}

Counts count_pixels(const Mask& pred, const Mask& truth) {
  const auto p = pred.array().cast<std::int64_t>();
  const auto t = truth.array().cast<std::int64_t>();
  Counts c;
  c.tp = static_cast<std::uint64_t>((p * t).sum());
  c.fp = static_cast<std::uint64_t>((p * (1 - t)).sum());
  c.fn = static_cast<std::uint64_t>(((1 - p) * t).sum());
  c.tn = static_cast<std::uint64_t>(((1 - p) * (1 - t)).sum());
  return c;
}

double pairwise_auc(const std::vector<std::pair<double, bool>>& scored) {
  double wins = 0.0;
  double pairs = 0.0;
  for (const auto& a : scored) {
    if (!a.second) continue;
    for (const auto& b : scored) {
      if (b.second) continue;
      pairs += 1.0;
      if (a.first > b.first) {
        wins += 1.0;
      } else if (a.first == b.first) {
        wins += 0.5;
      }
    }
  }
  return wins / pairs;
}

std::pair<double, double> moments(const Matrix<double>& values) {
  long double sum = 0.0L;
  for (Index i = 0; i < values.size(); ++i) sum += values.data()[i];
  const long double n = static_cast<long double>(values.size());
  const long double mean = sum / n;
  long double sq = 0.0L;
  for (Index i = 0; i < values.size(); ++i) {
    const long double dv = values.data()[i] - mean;
    sq += dv * dv;
  }
  return {static_cast<double>(mean), static_cast<double>(std::sqrt(sq / n))};
}

double nearest_rank_percentile(std::vector<double> values, int percent) {
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  for (double v : values) {
    std::size_t at_most = 0;
    for (double w : values) at_most += w <= v ? 1 : 0;
    if (at_most * 100 >= static_cast<std::size_t>(percent) * n) return v;
  }
  return values.back();
}

double bilinear_at(const Matrix<double>& src, double y, double x) {
  y = std::min(std::max(y, 0.0), static_cast<double>(src.rows() - 1));
  x = std::min(std::max(x, 0.0), static_cast<double>(src.cols() - 1));
  const auto y0 = static_cast<Index>(std::floor(y));
  const auto x0 = static_cast<Index>(std::floor(x));
  const Index y1 = std::min<Index>(y0 + 1, src.rows() - 1);
  const Index x1 = std::min<Index>(x0 + 1, src.cols() - 1);
  const double ty = y - static_cast<double>(y0);
  const double tx = x - static_cast<double>(x0);
  return src(y0, x0) * (1 - ty) * (1 - tx) + src(y0, x1) * (1 - ty) * tx + src(y1, x0) * ty * (1 - tx) +
         src(y1, x1) * ty * tx;
}

}  // namespace vaas::oracle
