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

// End-to-end per-sample analysis: features -> global score, local result,
// hybrid score. Shared by the CLI commands, the report builder and renderer.

#ifndef VAAS_PIPELINE_HPP_
#define VAAS_PIPELINE_HPP_

#include <string>
#include <vector>

#include "vaas/features.hpp"
#include "vaas/fusion.hpp"
#include "vaas/fx_global.hpp"
#include "vaas/manifest.hpp"
#include "vaas/px_local.hpp"

namespace vaas {

struct EngineConfig {
  FeatureMode mode = FeatureMode::kToy;
  ToyConfig toy;
  PatchGridConfig patch;
  FusionConfig fusion;
  int attention_layers = kDefaultAttentionLayers;
  // Sample-level decision threshold on S_H.
  double decision_threshold = 0.5;

  void validate() const;
};

struct SampleAnalysis {
  AttentionMap attention;
  AttentionSummary summary;
  GlobalScore global;
  LocalResult local;
  ScoreRecord record;
};

AttentionSummary summarise_bundle(const FeatureBundle& bundle, const EngineConfig& cfg);

SampleAnalysis analyse(const FeatureBundle& bundle, const SampleEntry& entry, const ReferenceStats& ref,
                       const EngineConfig& cfg);

// Calibrates on every authentic sample of the manifest, in manifest order.
ReferenceStats calibrate_manifest(const DatasetManifest& manifest, const EngineConfig& cfg);

std::vector<ScoreRecord> score_manifest(const DatasetManifest& manifest, const ReferenceStats& ref,
                                        const EngineConfig& cfg);

// CSV with header id,label,s_f_raw,s_f,s_p,s_h,mode,alpha.
std::string scores_csv(const std::vector<ScoreRecord>& records);

}  // namespace vaas

#endif  // VAAS_PIPELINE_HPP_
