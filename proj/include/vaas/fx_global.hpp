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

// Global anomaly estimation from transformer attention.
//
// The attention stack is reduced to a per-token "received attention" field
// (column means of the layer/head-averaged matrix), resampled to image
// resolution, and summarised by its mean and standard deviation. The global
// score is the deviation of the mean from authentic reference statistics:
//
//   S_F = |mu - mu_ref| / sigma_ref
//
// and is mapped to [0,1] with the 1st/99th percentiles of the calibration
// set's own scores so that it can be fused with the bounded local score.

#ifndef VAAS_FX_GLOBAL_HPP_
#define VAAS_FX_GLOBAL_HPP_

#include <cmath>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vaas/core.hpp"
#include "vaas/features.hpp"

namespace vaas {

inline constexpr int kDefaultAttentionLayers = 4;
inline constexpr double kSigmaRefFloor = 1e-6;  // relative to |mu_ref|

struct AttentionMap {
  Matrix<double> values;  // image resolution, non-negative
  Index source_rows = 0;  // token grid before resampling
  Index source_cols = 0;
};

struct AttentionSummary {
  double mu = 0.0;
  double sigma = 0.0;  // population form
};

struct ReferenceStats {
  double mu_ref = 0.0;
  double sigma_ref = 1.0;
  double raw_p01 = 0.0;
  double raw_p99 = 0.0;
  std::size_t n_samples = 0;

  // Throws ValidationError when an invariant is violated.
  void validate() const;
};

struct GlobalScore {
  double raw = 0.0;
  double normalised = 0.0;
};

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Averages the last min(last_k, L) layers and all heads, drops a leading
// class token when T = token_rows * token_cols + 1, takes column means and
// bilinearly resamples the token grid to (image_rows, image_cols).
AttentionMap aggregate_attention(const Tensor& attention, int token_rows, int token_cols,
                                 int image_rows, int image_cols, int last_k = kDefaultAttentionLayers);
AttentionMap aggregate_attention(const FeatureBundle& bundle, int last_k = kDefaultAttentionLayers);

template <typename Derived>
AttentionSummary summarise(const Eigen::MatrixBase<Derived>& values) {
  if (values.size() == 0) throw ValidationError("cannot summarise an empty map");
  CompensatedSum total;
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c) total.add(static_cast<double>(values(r, c)));
  }
  const double n = static_cast<double>(values.size());
  const double mu = total.value() / n;
  CompensatedSum sq;
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c) {
      const double d = static_cast<double>(values(r, c)) - mu;
      sq.add(d * d);
    }
  }
  return {mu, std::sqrt(sq.value() / n)};
}

inline AttentionSummary summarise(const AttentionMap& map) { return summarise(map.values); }

// Value at 1-based rank ceil(percent * n / 100) of an ascending sequence.
double nearest_rank(std::span<const double> sorted, int percent);

// mu_ref / sigma_ref are the mean and population std of per-sample means;
// the raw scores of the calibration set itself supply raw_p01 / raw_p99.
// Throws ValidationError for fewer than two samples and DataError when
// sigma_ref <= kSigmaRefFloor * |mu_ref|.
ReferenceStats calibrate(std::span<const AttentionSummary> summaries);

GlobalScore score_global(const AttentionSummary& s, const ReferenceStats& ref);

std::string dump_reference(const ReferenceStats& ref);
ReferenceStats parse_reference(const std::string& json_text);
void save_reference(const ReferenceStats& ref, const std::filesystem::path& path);
ReferenceStats load_reference(const std::filesystem::path& path);

}  // namespace vaas

#endif  // VAAS_FX_GLOBAL_HPP_
