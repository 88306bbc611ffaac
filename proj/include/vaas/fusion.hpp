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

// Hybrid scoring: weighted and harmonic fusion of the normalised global
// score with the local score, and the alpha-sweep harness.

#ifndef VAAS_FUSION_HPP_
#define VAAS_FUSION_HPP_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vaas/manifest.hpp"
#include "vaas/metrics.hpp"

namespace vaas {

enum class FusionMode { kWeighted, kHarmonic };

std::string_view to_string(FusionMode mode);
FusionMode parse_fusion_mode(std::string_view text);

struct FusionConfig {
  FusionMode mode = FusionMode::kWeighted;
  double alpha = 0.6;
  double epsilon_h = 1e-9;

  void validate() const;
};

struct ScoreRecord {
  std::string sample_id;
  Label label = Label::kAuthentic;
  double s_f_raw = 0.0;
  double s_f = 0.0;
  double s_p = 0.0;
  double s_h = 0.0;
  FusionConfig config;
};

// alpha * s_f + (1 - alpha) * s_p. Throws ValidationError for alpha outside [0,1].
double fuse_weighted(double s_f, double s_p, double alpha);

// 2 s_f s_p / (s_f + s_p); 0 when s_f + s_p < epsilon.
double fuse_harmonic(double s_f, double s_p, double epsilon = 1e-9);

double fuse(const FusionConfig& cfg, double s_f, double s_p);

struct AlphaGrid {
  double min = 0.3;
  double max = 0.8;
  double step = 0.05;

  // Inclusive grid min + k * step, rounded to 12 decimals.
  std::vector<double> values() const;
};

struct SweepSample {
  double s_f = 0.0;
  double s_p = 0.0;
  bool tampered = false;
  // Pixel-level counts for a given fusion setting; empty when the sample
  // has no ground truth.
  std::function<ConfusionCounts(double alpha, FusionMode mode)> localisation;
};

struct SweepRow {
  double alpha = 0.0;
  FusionMode mode = FusionMode::kWeighted;
  Metrics detection;           // sample-level, from s_h >= threshold
  std::optional<double> iou;   // pixel-level, when every sample has a closure
};

// Rows are grouped by mode (in the order given), alpha ascending within a
// mode. Harmonic rows do not depend on alpha and repeat for alignment.
std::vector<SweepRow> sweep_alpha(std::span<const SweepSample> samples, const AlphaGrid& grid,
                                  double decision_threshold, std::span<const FusionMode> modes,
                                  double epsilon_h = 1e-9);

// CSV with header alpha,mode,f1,iou,precision,recall.
std::string sweep_csv(std::span<const SweepRow> rows);

// Shortest round-trip decimal form; used by every text artifact.
std::string format_number(double x);

}  // namespace vaas

#endif  // VAAS_FUSION_HPP_
