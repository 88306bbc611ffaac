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

#include "vaas/report.hpp"

#include "json.hpp"

namespace vaas {
namespace {

using nlohmann::json;

json metrics_json(const Metrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"iou", m.iou}};
}

json counts_json(const ConfusionCounts& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
}

json config_json(const EngineConfig& cfg) {
  return {
      {"provider", cfg.mode == FeatureMode::kToy ? "toy" : "file"},
      {"toy",
       {{"seed", cfg.toy.seed},
        {"token_grid", {cfg.toy.token_rows, cfg.toy.token_cols}},
        {"temperature", cfg.toy.temperature},
        {"patch_size", cfg.toy.patch_size},
        {"embed_dim", cfg.toy.embed_dim},
        {"cls_token", cfg.toy.cls_token}}},
      {"patch",
       {{"patch_size", cfg.patch.patch_size},
        {"neighbourhood", static_cast<int>(cfg.patch.neighbourhood)},
        {"clamp_negative", cfg.patch.clamp_negative},
        {"binarise_threshold", cfg.patch.binarise_threshold}}},
      {"fusion",
       {{"mode", std::string(to_string(cfg.fusion.mode))},
        {"alpha", cfg.fusion.alpha},
        {"epsilon_h", cfg.fusion.epsilon_h}}},
      {"attention_layers", cfg.attention_layers},
      {"decision_threshold", cfg.decision_threshold},
  };
}

}  // namespace

Mask ground_truth(const DatasetManifest& manifest, const SampleEntry& entry) {
  const Index rows = manifest.meta.image_rows;
  const Index cols = manifest.meta.image_cols;
  if (!entry.mask_path) {
    if (entry.label == Label::kTampered) {
      throw ValidationError("tampered sample '" + entry.id + "' has no mask_path");
    }
    return Mask::Zero(rows, cols);
  }
  Mask m = load_mask(manifest.resolve(*entry.mask_path));
  if (m.rows() != rows || m.cols() != cols) m = resize_mask_nn(m, rows, cols);
  return m;
}

EvalReport evaluate_dataset(const DatasetManifest& manifest, const ReferenceStats& ref,
                            const EngineConfig& cfg) {
  cfg.validate();
  ref.validate();
  // Check masks up front so a missing one fails before any feature work.
  for (const auto& s : manifest.samples) {
    if (s.label == Label::kTampered && !s.mask_path) {
      throw ValidationError("tampered sample '" + s.id + "' has no mask_path");
    }
  }

  const FeatureProvider provider(manifest, cfg.mode, cfg.toy);
  EvalReport report;
  report.config = cfg;
  report.reference = ref;
  Metrics macro_sum{0, 0, 0, 0};
  std::vector<std::pair<double, bool>> scored;

  for (const auto& s : manifest.samples) {
    const SampleAnalysis a = analyse(provider.fetch(s.id), s, ref, cfg);
    SampleEvaluation e;
    e.record = a.record;
    e.counts = confusion(a.local.mask, ground_truth(manifest, s));
    e.metrics = metrics(e.counts);
    report.pixel_counts += e.counts;
    macro_sum.precision += e.metrics.precision;
    macro_sum.recall += e.metrics.recall;
    macro_sum.f1 += e.metrics.f1;
    macro_sum.iou += e.metrics.iou;

    const bool tampered = s.label == Label::kTampered;
    const bool flagged = e.record.s_h >= cfg.decision_threshold;
    if (flagged) {
      (tampered ? report.detection_counts.tp : report.detection_counts.fp) += 1;
    } else {
      (tampered ? report.detection_counts.fn : report.detection_counts.tn) += 1;
    }
    scored.emplace_back(e.record.s_h, tampered);
    report.per_sample.push_back(std::move(e));
  }

  report.micro = metrics(report.pixel_counts);
  if (!report.per_sample.empty()) {
    const auto n = static_cast<double>(report.per_sample.size());
    report.macro = {macro_sum.precision / n, macro_sum.recall / n, macro_sum.f1 / n, macro_sum.iou / n};
  }
  report.detection = metrics(report.detection_counts);
  const std::size_t positives = manifest.count(Label::kTampered);
  if (positives > 0 && positives < manifest.samples.size()) report.detection_auc = detection_auc(scored);
  return report;
}

std::vector<SweepSample> sweep_samples(const DatasetManifest& manifest, const ReferenceStats& ref,
                                       const EngineConfig& cfg) {
  cfg.validate();
  ref.validate();
  const FeatureProvider provider(manifest, cfg.mode, cfg.toy);
  std::vector<SweepSample> out;
  for (const auto& s : manifest.samples) {
    const SampleAnalysis a = analyse(provider.fetch(s.id), s, ref, cfg);
    SweepSample sample;
    sample.s_f = a.record.s_f;
    sample.s_p = a.record.s_p;
    sample.tampered = s.label == Label::kTampered;
    if (s.mask_path || s.label == Label::kAuthentic) {
      const ConfusionCounts counts = confusion(a.local.mask, ground_truth(manifest, s));
      sample.localisation = [counts](double, FusionMode) { return counts; };
    }
    out.push_back(std::move(sample));
  }
  return out;
}

std::string report_json(const EvalReport& r) {
  json samples = json::array();
  for (const auto& e : r.per_sample) {
    samples.push_back({{"id", e.record.sample_id},
                       {"label", std::string(to_string(e.record.label))},
                       {"s_f_raw", e.record.s_f_raw},
                       {"s_f", e.record.s_f},
                       {"s_p", e.record.s_p},
                       {"s_h", e.record.s_h},
                       {"counts", counts_json(e.counts)},
                       {"precision", e.metrics.precision},
                       {"recall", e.metrics.recall},
                       {"f1", e.metrics.f1},
                       {"iou", e.metrics.iou}});
  }
  json doc = {
      {"config", config_json(r.config)},
      {"reference",
       {{"mu_ref", r.reference.mu_ref},
        {"sigma_ref", r.reference.sigma_ref},
        {"raw_p01", r.reference.raw_p01},
        {"raw_p99", r.reference.raw_p99},
        {"n_samples", r.reference.n_samples}}},
      {"localisation",
       {{"counts", counts_json(r.pixel_counts)},
        {"micro", metrics_json(r.micro)},
        {"macro", metrics_json(r.macro)}}},
      {"detection",
       {{"counts", counts_json(r.detection_counts)},
        {"metrics", metrics_json(r.detection)},
        {"auc", r.detection_auc ? json(*r.detection_auc) : json(nullptr)}}},
      {"samples", std::move(samples)},
  };
  return doc.dump(2) + "\n";
}

std::string report_csv(const EvalReport& r) {
  std::string out = "id,label,s_f,s_p,s_h,precision,recall,f1,iou\n";
  for (const auto& e : r.per_sample) {
    out += e.record.sample_id + ',' + std::string(to_string(e.record.label)) + ',' +
           format_number(e.record.s_f) + ',' + format_number(e.record.s_p) + ',' +
           format_number(e.record.s_h) + ',' + format_number(e.metrics.precision) + ',' +
           format_number(e.metrics.recall) + ',' + format_number(e.metrics.f1) + ',' +
           format_number(e.metrics.iou) + '\n';
  }
  return out;
}

}  // namespace vaas
