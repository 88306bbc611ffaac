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

// Seeded synthetic forensics dataset: flat grey images with a mild gradient
// and pixel noise; tampered images additionally carry one pasted block of
// sparse impulse noise aligned to the patch grid, with its ground-truth mask.

#ifndef VAAS_SYNTHETIC_HPP_
#define VAAS_SYNTHETIC_HPP_

#include <cstdint>
#include <filesystem>

#include "vaas/image.hpp"
#include "vaas/manifest.hpp"

namespace vaas {

struct SyntheticConfig {
  std::uint64_t seed = 2024;
  int n_authentic = 20;
  int n_tampered = 20;
  int image_size = 224;
  int patch_size = 32;
  int embed_dim = 256;
  int block_size = 64;
  // Probability that a channel value inside the block is 1 (else 0).
  double impulse_probability = 0.1;
  double background_min = 0.35;
  double background_max = 0.65;
  // Peak-to-peak brightness change of the linear gradient along each axis.
  double gradient = 0.1;
  // Half-width of the uniform per-pixel noise.
  double pixel_noise = 0.02;

  void validate() const;
};

struct SyntheticSample {
  Image image;
  Mask mask;  // all zero for authentic samples
  bool tampered = false;
};

// Samples are generated in order (authentic first) from one SplitMix64 stream.
std::vector<SyntheticSample> make_synthetic_samples(const SyntheticConfig& cfg);

// Writes PNG images, PNG masks for tampered samples and manifest.json into
// `dir` (created if needed); returns the manifest as loaded from disk.
DatasetManifest write_synthetic_dataset(const SyntheticConfig& cfg, const std::filesystem::path& dir);

}  // namespace vaas

#endif  // VAAS_SYNTHETIC_HPP_
