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

// vaas: command-line driver for calibration, scoring, evaluation, alpha
// sweeps, composite rendering and the oracle self-check.
//
// Exit status: 0 on success, 1 for invalid input or flags, 2 for data and
// runtime failures. Diagnostics are a single line on stderr.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vaas/core.hpp"
#include "vaas/features.hpp"
#include "vaas/fusion.hpp"
#include "vaas/fx_global.hpp"
#include "vaas/image.hpp"
#include "vaas/manifest.hpp"
#include "vaas/pipeline.hpp"
#include "vaas/render.hpp"
#include "vaas/report.hpp"
#include "vaas/selfcheck.hpp"
#include "vaas/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitData = 2;

// Collects every output a command writes so that a failure part way through
// leaves no half-written artifact behind.
class OutputSet {
 public:
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
  }

  void text(const fs::path& path, const std::string& content) {
    const fs::path tmp = staging(path);
    {
      std::ofstream out(tmp, std::ios::binary);
      out << content;
      if (!out.flush()) throw vaas::DataError("cannot write " + tmp.string());
    }
    publish(tmp, path);
  }

  void png(const fs::path& path, const vaas::Rgb8& raster) {
    const fs::path tmp = staging(path);
    vaas::write_png(raster, tmp);
    publish(tmp, path);
  }

  void commit() { committed_ = true; }

 private:
  static fs::path staging(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    return fs::path(path.string() + ".partial");
  }

  void publish(const fs::path& tmp, const fs::path& path) {
    written_.push_back(tmp);
    fs::rename(tmp, path);
    written_.back() = path;
  }

  std::vector<fs::path> written_;
  bool committed_ = false;
};

struct EngineFlags {
  std::string manifest;
  std::string mode = "toy";
  std::string fusion = "weighted";
  std::string neighbourhood = "8";
  bool no_clamp = false;
  vaas::EngineConfig cfg;

  void add(CLI::App* cmd) {
    cmd->add_option("--manifest", manifest, "dataset manifest (JSON)")->required();
    cmd->add_option("--mode", mode, "feature provider: toy or file")->capture_default_str();
    cmd->add_option("--seed", cfg.toy.seed, "toy provider seed")->capture_default_str();
    cmd->add_option("--tau", cfg.toy.temperature, "toy attention temperature")->capture_default_str();
    cmd->add_option("--layers", cfg.attention_layers, "attention layers averaged (last k)")
        ->capture_default_str();
    cmd->add_option("--alpha", cfg.fusion.alpha, "weight of the global score")->capture_default_str();
    cmd->add_option("--fusion", fusion, "fusion mode: weighted or harmonic")->capture_default_str();
    cmd->add_option("--neighbourhood", neighbourhood, "patch neighbourhood: 4 or 8")->capture_default_str();
    cmd->add_flag("--no-clamp", no_clamp, "keep negative cosine similarities");
    cmd->add_option("--bin-threshold", cfg.patch.binarise_threshold, "Px mask threshold")
        ->capture_default_str();
    cmd->add_option("--threshold", cfg.decision_threshold, "detection threshold on s_h")
        ->capture_default_str();
  }

  vaas::EngineConfig resolve() {
    cfg.mode = vaas::parse_feature_mode(mode);
    cfg.fusion.mode = vaas::parse_fusion_mode(fusion);
    if (neighbourhood == "8") {
      cfg.patch.neighbourhood = vaas::Neighbourhood::kEight;
    } else if (neighbourhood == "4") {
      cfg.patch.neighbourhood = vaas::Neighbourhood::kFour;
    } else {
      throw vaas::ValidationError("--neighbourhood must be 4 or 8");
    }
    cfg.patch.clamp_negative = !no_clamp;
    cfg.validate();
    return cfg;
  }
};

std::string summary_line(const vaas::ReferenceStats& ref) {
  return "n_samples=" + std::to_string(ref.n_samples) + " mu_ref=" + vaas::format_number(ref.mu_ref) +
         " sigma_ref=" + vaas::format_number(ref.sigma_ref);
}

// Ground truth for the composite: the stored mask, an empty mask for an
// authentic sample without one, and nothing for an unannotated tampered one.
std::optional<vaas::Mask> render_truth(const vaas::DatasetManifest& m, const vaas::SampleEntry& e) {
  if (!e.mask_path && e.label == vaas::Label::kTampered) return std::nullopt;
  return vaas::ground_truth(m, e);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VAAS anomaly scoring engine"};
  app.require_subcommand(1);

  // synth
  vaas::SyntheticConfig synth;
  std::string synth_dir;
  auto* cmd_synth = app.add_subcommand("synth", "write the synthetic tamper dataset");
  cmd_synth->add_option("--out-dir", synth_dir, "output directory")->required();
  cmd_synth->add_option("--seed", synth.seed, "generator seed")->capture_default_str();
  cmd_synth->add_option("--authentic", synth.n_authentic, "authentic sample count")->capture_default_str();
  cmd_synth->add_option("--tampered", synth.n_tampered, "tampered sample count")->capture_default_str();

  // calibrate
  EngineFlags calib;
  std::string calib_out;
  auto* cmd_calib = app.add_subcommand("calibrate", "fit reference attention statistics");
  calib.add(cmd_calib);
  cmd_calib->add_option("--out", calib_out, "reference statistics (JSON)")->required();

  // score
  EngineFlags score;
  std::string score_ref, score_out;
  auto* cmd_score = app.add_subcommand("score", "per-sample S_F, S_P and S_H");
  score.add(cmd_score);
  cmd_score->add_option("--ref", score_ref, "reference statistics")->required();
  cmd_score->add_option("--out", score_out, "scores CSV")->required();

  // evaluate
  EngineFlags eval;
  std::string eval_ref, eval_json, eval_csv;
  auto* cmd_eval = app.add_subcommand("evaluate", "localisation and detection metrics");
  eval.add(cmd_eval);
  cmd_eval->add_option("--ref", eval_ref, "reference statistics")->required();
  cmd_eval->add_option("--out", eval_json, "report JSON")->required();
  cmd_eval->add_option("--csv", eval_csv, "per-sample CSV (default: report path with .csv)");

  // sweep
  EngineFlags sweep;
  vaas::AlphaGrid grid;
  std::string sweep_ref, sweep_out;
  auto* cmd_sweep = app.add_subcommand("sweep", "alpha sweep for both fusion modes");
  sweep.add(cmd_sweep);
  cmd_sweep->add_option("--ref", sweep_ref, "reference statistics")->required();
  cmd_sweep->add_option("--out", sweep_out, "sweep CSV")->required();
  cmd_sweep->add_option("--alpha-min", grid.min)->capture_default_str();
  cmd_sweep->add_option("--alpha-max", grid.max)->capture_default_str();
  cmd_sweep->add_option("--alpha-step", grid.step)->capture_default_str();

  // render
  EngineFlags render;
  std::string render_ref, render_dir;
  std::vector<std::string> render_ids;
  auto* cmd_render = app.add_subcommand("render", "six-panel composites");
  render.add(cmd_render);
  cmd_render->add_option("--ref", render_ref, "reference statistics")->required();
  cmd_render->add_option("--out-dir", render_dir, "output directory")->required();
  cmd_render->add_option("--id", render_ids, "sample ids (default: all)");

  // selfcheck
  vaas::SelfcheckOptions check;
  std::vector<std::string> check_suites;
  auto* cmd_check = app.add_subcommand("selfcheck", "run the oracle suites");
  cmd_check->add_option("--seed", check.seed)->capture_default_str();
  cmd_check->add_option("--suite", check_suites, "run only these suites");
  cmd_check->add_option("--grad-tol", check.gradient_tolerance)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "vaas: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    OutputSet out;
    if (*cmd_synth) {
      synth.validate();
      const fs::path dir(synth_dir);
      const auto manifest = vaas::write_synthetic_dataset(synth, dir);
      std::cout << "wrote " << manifest.samples.size() << " samples to " << (dir / "manifest.json").string()
                << "\n";
    } else if (*cmd_calib) {
      const auto cfg = calib.resolve();
      const auto manifest = vaas::load_manifest(calib.manifest);
      const auto ref = vaas::calibrate_manifest(manifest, cfg);
      out.text(calib_out, vaas::dump_reference(ref));
      std::cout << summary_line(ref) << "\n";
    } else if (*cmd_score) {
      const auto cfg = score.resolve();
      const auto manifest = vaas::load_manifest(score.manifest);
      const auto ref = vaas::load_reference(score_ref);
      out.text(score_out, vaas::scores_csv(vaas::score_manifest(manifest, ref, cfg)));
    } else if (*cmd_eval) {
      const auto cfg = eval.resolve();
      const auto manifest = vaas::load_manifest(eval.manifest);
      const auto ref = vaas::load_reference(eval_ref);
      const auto report = vaas::evaluate_dataset(manifest, ref, cfg);
      fs::path csv = eval_csv.empty() ? fs::path(eval_json).replace_extension(".csv") : fs::path(eval_csv);
      out.text(eval_json, vaas::report_json(report));
      out.text(csv, vaas::report_csv(report));
      std::cout << "pixel f1=" << vaas::format_number(report.micro.f1)
                << " iou=" << vaas::format_number(report.micro.iou)
                << " detection f1=" << vaas::format_number(report.detection.f1) << "\n";
    } else if (*cmd_sweep) {
      const auto cfg = sweep.resolve();
      const auto manifest = vaas::load_manifest(sweep.manifest);
      const auto ref = vaas::load_reference(sweep_ref);
      const auto samples = vaas::sweep_samples(manifest, ref, cfg);
      const vaas::FusionMode modes[] = {vaas::FusionMode::kWeighted, vaas::FusionMode::kHarmonic};
      const auto rows = vaas::sweep_alpha(samples, grid, cfg.decision_threshold, modes, cfg.fusion.epsilon_h);
      out.text(sweep_out, vaas::sweep_csv(rows));
    } else if (*cmd_render) {
      const auto cfg = render.resolve();
      const auto manifest = vaas::load_manifest(render.manifest);
      const auto ref = vaas::load_reference(render_ref);
      if (render_ids.empty()) {
        for (const auto& s : manifest.samples) render_ids.push_back(s.id);
      }
      const vaas::FeatureProvider provider(manifest, cfg.mode, cfg.toy);
      for (const auto& id : render_ids) {
        const auto& entry = manifest.at(id);
        const auto analysis = vaas::analyse(provider.fetch(id), entry, ref, cfg);
        const auto truth = render_truth(manifest, entry);
        if (!truth) std::cerr << "vaas: warning: " << id << " has no ground-truth mask\n";
        const auto canvas = vaas::render_composite(provider.image(id), truth ? &*truth : nullptr, analysis);
        out.png(fs::path(render_dir) / (id + ".png"), canvas);
      }
    } else if (*cmd_check) {
      std::vector<vaas::SuiteResult> results;
      if (check_suites.empty()) {
        results = vaas::run_selfcheck(check);
      } else {
        std::sort(check_suites.begin(), check_suites.end());
        for (const auto& name : check_suites) results.push_back(vaas::run_suite(name, check));
      }
      std::vector<std::string> failed;
      for (const auto& r : results) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        if (!r.passed) failed.push_back(r.name);
      }
      if (!failed.empty()) {
        std::string names;
        for (const auto& n : failed) names += (names.empty() ? "" : ", ") + n;
        std::cerr << "vaas: selfcheck failed: " << names << "\n";
        return kExitData;
      }
    }
    out.commit();
    return 0;
  } catch (const vaas::ValidationError& e) {
    std::cerr << "vaas: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "vaas: " << e.what() << "\n";
    return kExitData;
  }
}
