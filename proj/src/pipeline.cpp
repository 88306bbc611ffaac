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

#include "vaas/pipeline.hpp"

namespace vaas {

void EngineConfig::validate() const {
  toy.validate();
  patch.validate();
  fusion.validate();
  if (attention_layers < 1) throw ValidationError("attention layers must be >= 1");
  if (!(decision_threshold >= 0.0 && decision_threshold <= 1.0)) {
    throw ValidationError("decision threshold must lie in [0,1]");
  }
}

AttentionSummary summarise_bundle(const FeatureBundle& bundle, const EngineConfig& cfg) {
  return summarise(aggregate_attention(bundle, cfg.attention_layers));
}

SampleAnalysis analyse(const FeatureBundle& bundle, const SampleEntry& entry, const ReferenceStats& ref,
                       const EngineConfig& cfg) {
  SampleAnalysis a;
  a.attention = aggregate_attention(bundle, cfg.attention_layers);
  a.summary = summarise(a.attention);
  a.global = score_global(a.summary, ref);
  a.local = local_score(bundle, cfg.patch);

  ScoreRecord& r = a.record;
  r.sample_id = entry.id;
  r.label = entry.label;
  r.s_f_raw = a.global.raw;
  r.s_f = a.global.normalised;
  r.s_p = a.local.s_p;
  r.s_h = fuse(cfg.fusion, r.s_f, r.s_p);
  r.config = cfg.fusion;
  return a;
}

ReferenceStats calibrate_manifest(const DatasetManifest& manifest, const EngineConfig& cfg) {
  cfg.validate();
  const std::size_t n = manifest.count(Label::kAuthentic);
  if (n < 2) {
    throw ValidationError("need >= 2 authentic samples for calibration, manifest has " + std::to_string(n));
  }
  const FeatureProvider provider(manifest, cfg.mode, cfg.toy);
  std::vector<AttentionSummary> summaries;
  summaries.reserve(n);
  for (const auto& s : manifest.samples) {
    if (s.label != Label::kAuthentic) continue;
    summaries.push_back(summarise_bundle(provider.fetch(s.id), cfg));
  }
  return calibrate(summaries);
}

std::vector<ScoreRecord> score_manifest(const DatasetManifest& manifest, const ReferenceStats& ref,
                                        const EngineConfig& cfg) {
  cfg.validate();
  ref.validate();
  const FeatureProvider provider(manifest, cfg.mode, cfg.toy);
  std::vector<ScoreRecord> out;
  out.reserve(manifest.samples.size());
  for (const auto& s : manifest.samples) {
    out.push_back(analyse(provider.fetch(s.id), s, ref, cfg).record);
  }
  return out;
}

std::string scores_csv(const std::vector<ScoreRecord>& records) {
  std::string out = "id,label,s_f_raw,s_f,s_p,s_h,mode,alpha\n";
  for (const auto& r : records) {
    out += r.sample_id + ',' + std::string(to_string(r.label)) + ',' + format_number(r.s_f_raw) + ',' +
           format_number(r.s_f) + ',' + format_number(r.s_p) + ',' + format_number(r.s_h) + ',' +
           std::string(to_string(r.config.mode)) + ',' + format_number(r.config.alpha) + '\n';
  }
  return out;
}

}  // namespace vaas
