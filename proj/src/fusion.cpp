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

#include "vaas/fusion.hpp"

#include <charconv>
#include <cmath>

#include "vaas/core.hpp"

namespace vaas {

std::string_view to_string(FusionMode mode) {
  return mode == FusionMode::kWeighted ? "weighted" : "harmonic";
}

FusionMode parse_fusion_mode(std::string_view text) {
  if (text == "weighted") return FusionMode::kWeighted;
  if (text == "harmonic") return FusionMode::kHarmonic;
  throw ValidationError("fusion mode must be \"weighted\" or \"harmonic\"");
}

void FusionConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0,1]");
  if (!(epsilon_h > 0.0)) throw ValidationError("epsilon_h must be > 0");
}

double fuse_weighted(double s_f, double s_p, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0,1]");
  if (alpha == 1.0) return s_f;
  if (alpha == 0.0) return s_p;
  // s_p + alpha * (s_f - s_p) keeps the result inside [min, max] of the inputs.
  const double v = s_p + alpha * (s_f - s_p);
  return std::clamp(v, std::min(s_f, s_p), std::max(s_f, s_p));
}

double fuse_harmonic(double s_f, double s_p, double epsilon) {
  const double sum = s_f + s_p;
  if (sum < epsilon) return 0.0;
  const double v = 2.0 * s_f * s_p / sum;
  // The harmonic mean never exceeds the arithmetic mean; keep that true after rounding.
  return std::clamp(std::min(v, fuse_weighted(s_f, s_p, 0.5)), std::min(s_f, s_p), std::max(s_f, s_p));
}

double fuse(const FusionConfig& cfg, double s_f, double s_p) {
  return cfg.mode == FusionMode::kWeighted ? fuse_weighted(s_f, s_p, cfg.alpha)
                                           : fuse_harmonic(s_f, s_p, cfg.epsilon_h);
}

std::vector<double> AlphaGrid::values() const {
  if (!(step > 0.0)) throw ValidationError("alpha step must be > 0");
  if (!(min <= max)) throw ValidationError("alpha min must not exceed alpha max");
  if (min < 0.0 || max > 1.0) throw ValidationError("alpha range must lie within [0,1]");
  const auto n = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = std::round((min + static_cast<double>(k) * step) * 1e12) / 1e12;
  }
  return out;
}

std::vector<SweepRow> sweep_alpha(std::span<const SweepSample> samples, const AlphaGrid& grid,
                                  double decision_threshold, std::span<const FusionMode> modes,
                                  double epsilon_h) {
  if (samples.empty()) throw ValidationError("alpha sweep needs at least one sample");
  const auto alphas = grid.values();
  bool have_masks = true;
  for (const auto& s : samples) have_masks = have_masks && static_cast<bool>(s.localisation);

  std::vector<SweepRow> rows;
  for (FusionMode mode : modes) {
    for (double alpha : alphas) {
      const FusionConfig cfg{mode, alpha, epsilon_h};
      ConfusionCounts detection;
      ConfusionCounts pixels;
      for (const auto& s : samples) {
        const bool flagged = fuse(cfg, s.s_f, s.s_p) >= decision_threshold;
        if (flagged) {
          (s.tampered ? detection.tp : detection.fp) += 1;
        } else {
          (s.tampered ? detection.fn : detection.tn) += 1;
        }
        if (have_masks) pixels += s.localisation(alpha, mode);
      }
      SweepRow row;
      row.alpha = alpha;
      row.mode = mode;
      row.detection = metrics(detection);
      if (have_masks) row.iou = metrics(pixels).iou;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "alpha,mode,f1,iou,precision,recall\n";
  for (const auto& r : rows) {
    out += format_number(r.alpha);
    out += ',';
    out += to_string(r.mode);
    out += ',' + format_number(r.detection.f1) + ',';
    if (r.iou) out += format_number(*r.iou);
    out += ',' + format_number(r.detection.precision) + ',' + format_number(r.detection.recall) + '\n';
  }
  return out;
}

}  // namespace vaas
