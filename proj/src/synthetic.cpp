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

#include "vaas/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

#include "vaas/splitmix64.hpp"

namespace vaas {

void SyntheticConfig::validate() const {
  if (n_authentic < 0 || n_tampered < 0) throw ValidationError("sample counts must be >= 0");
  if (patch_size < 1 || image_size % patch_size != 0) {
    throw ValidationError("image size must be a multiple of the patch size");
  }
  if (block_size < patch_size || block_size % patch_size != 0 || block_size > image_size) {
    throw ValidationError("block size must be a multiple of the patch size within the image");
  }
  if (!(impulse_probability > 0.0 && impulse_probability <= 1.0)) {
    throw ValidationError("impulse probability must lie in (0,1]");
  }
  if (!(background_min >= 0.0 && background_min <= background_max && background_max <= 1.0)) {
    throw ValidationError("background range must lie within [0,1]");
  }
}

std::vector<SyntheticSample> make_synthetic_samples(const SyntheticConfig& cfg) {
  cfg.validate();
  SplitMix64 rng(cfg.seed);
  const Index n = cfg.image_size;
  std::vector<SyntheticSample> out;
  for (int k = 0; k < cfg.n_authentic + cfg.n_tampered; ++k) {
    SyntheticSample s;
    s.tampered = k >= cfg.n_authentic;
    const double level = rng.uniform(cfg.background_min, cfg.background_max);
    const double gx = rng.uniform(-cfg.gradient, cfg.gradient);
    const double gy = rng.uniform(-cfg.gradient, cfg.gradient);

    Matrix<float> grey(n, n);
    for (Index r = 0; r < n; ++r) {
      for (Index c = 0; c < n; ++c) {
        const double v = level + gx * (static_cast<double>(c) / n - 0.5) +
                         gy * (static_cast<double>(r) / n - 0.5) + cfg.pixel_noise * rng.symmetric();
        grey(r, c) = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
    std::array<Matrix<float>, 3> planes = {grey, grey, grey};
    s.mask = Mask::Zero(n, n);

    if (s.tampered) {
      const auto slots = static_cast<std::uint64_t>((n - cfg.block_size) / cfg.patch_size + 1);
      const Index r0 = static_cast<Index>(rng.below(slots)) * cfg.patch_size;
      const Index c0 = static_cast<Index>(rng.below(slots)) * cfg.patch_size;
      for (Index r = r0; r < r0 + cfg.block_size; ++r) {
        for (Index c = c0; c < c0 + cfg.block_size; ++c) {
          for (auto& p : planes) p(r, c) = rng.uniform() < cfg.impulse_probability ? 1.0f : 0.0f;
        }
      }
      s.mask.block(r0, c0, cfg.block_size, cfg.block_size).setOnes();
    }
    s.image = Image(std::move(planes));
    out.push_back(std::move(s));
  }
  return out;
}

DatasetManifest write_synthetic_dataset(const SyntheticConfig& cfg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  DatasetManifest m;
  m.meta = {cfg.image_size, cfg.image_size, cfg.patch_size, cfg.embed_dim};
  m.base_dir = dir;
  const auto samples = make_synthetic_samples(cfg);
  int auth = 0;
  int tamp = 0;
  for (const auto& s : samples) {
    char id[32];
    std::snprintf(id, sizeof(id), s.tampered ? "tamp_%03d" : "auth_%03d", s.tampered ? tamp++ : auth++);
    SampleEntry e;
    e.id = id;
    e.label = s.tampered ? Label::kTampered : Label::kAuthentic;
    e.image_path = e.id + ".png";
    save_png(s.image, dir / e.image_path);
    if (s.tampered) {
      e.mask_path = e.id + "_mask.png";
      save_mask(s.mask, dir / *e.mask_path);
    }
    m.samples.push_back(std::move(e));
  }
  save_manifest(m, dir / "manifest.json");
  return load_manifest(dir / "manifest.json");
}

}  // namespace vaas
