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

// Dataset evaluation: per-sample localisation metrics, micro/macro
// aggregates, sample-level detection metrics and their JSON/CSV forms.

#ifndef VAAS_REPORT_HPP_
#define VAAS_REPORT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "vaas/fusion.hpp"
#include "vaas/metrics.hpp"
#include "vaas/pipeline.hpp"

namespace vaas {

struct SampleEvaluation {
  ScoreRecord record;
  ConfusionCounts counts;  // Px mask vs ground truth
  Metrics metrics;
};

struct EvalReport {
  std::vector<SampleEvaluation> per_sample;
  ConfusionCounts pixel_counts;
  Metrics micro;  // metrics of summed pixel counts (headline)
  Metrics macro;  // mean of per-sample metrics
  ConfusionCounts detection_counts;
  Metrics detection;                    // s_h >= decision threshold vs label
  std::optional<double> detection_auc;  // when both labels are present
  EngineConfig config;
  ReferenceStats reference;
};

// Ground truth at manifest resolution: the sample's mask resized
// nearest-neighbour, or all zeros for an authentic sample without a mask.
// Throws ValidationError for a tampered sample without a mask.
Mask ground_truth(const DatasetManifest& manifest, const SampleEntry& entry);

EvalReport evaluate_dataset(const DatasetManifest& manifest, const ReferenceStats& ref,
                            const EngineConfig& cfg);

// Per-sample inputs for sweep_alpha; localisation counts come from the Px mask.
std::vector<SweepSample> sweep_samples(const DatasetManifest& manifest, const ReferenceStats& ref,
                                       const EngineConfig& cfg);

std::string report_json(const EvalReport& report);
// Header id,label,s_f,s_p,s_h,precision,recall,f1,iou.
std::string report_csv(const EvalReport& report);

}  // namespace vaas

#endif  // VAAS_REPORT_HPP_
