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

// Per-sample feature sources.
//
// A FeatureBundle carries an attention stack [L, H, T, T] and a patch
// embedding matrix [M, D]. Bundles come either from exported VAST tensors
// (file mode) or from the deterministic toy extractor below, which needs no
// neural network and reproduces bit-identically from (image, ToyConfig).

#ifndef VAAS_FEATURES_HPP_
#define VAAS_FEATURES_HPP_

#include <cstdint>
#include <optional>
#include <string_view>

#include "vaas/core.hpp"
#include "vaas/image.hpp"
#include "vaas/manifest.hpp"
#include "vaas/tensor.hpp"

namespace vaas {

inline constexpr int kToyInputSize = 224;
inline constexpr double kRowSumTolerance = 1e-4;

enum class FeatureMode { kFile, kToy };

FeatureMode parse_feature_mode(std::string_view text);

struct ToyConfig {
  std::uint64_t seed = 0;
  int token_rows = 14;
  int token_cols = 14;
  // Attention temperature.
  double temperature = 0.05;
  int patch_size = 32;
  int embed_dim = 256;
  // Prepend a global token (whole-image statistics) ahead of the grid
  // tokens, the way ViT prepends its class token.
  bool cls_token = true;

  void validate() const;
};

struct FeatureBundle {
  Tensor attention;   // [L, H, T, T], rows sum to 1
  Tensor embeddings;  // [M, D]
  int token_rows = 0;
  int token_cols = 0;
  int grid_rows = 0;  // patch grid, grid_rows * grid_cols == M
  int grid_cols = 0;
  int image_rows = 0;
  int image_cols = 0;

  Index num_tokens() const { return static_cast<Index>(attention.dim(3)); }
  bool has_cls() const { return num_tokens() == Index{token_rows} * token_cols + 1; }
};

// Shape and row-stochasticity checks; throws DataError.
void validate_bundle(const FeatureBundle& bundle, const ManifestMeta& meta);

// Token features are (mean, stddev) of grayscale intensity in each grid cell;
// A[i][j] = exp(-|f_i - f_j|^2 / temperature), normalised per row.
// Returns [1, 1, T, T]. The image must be 224x224.
Tensor toy_attention(const Image& img, const ToyConfig& cfg);

// Random-projection patch embeddings: each k x k patch is flattened in
// (row, col, channel) order and mapped through a D x 3k^2 matrix drawn from
// SplitMix64(seed) in row-major order, then L2-normalised. All-zero patches
// take the direction of a constant patch. Returns [M, D].
Tensor toy_patch_embeddings(const Image& img, const ToyConfig& cfg);

// Caches the toy projection matrix across samples.
class ToyExtractor {
 public:
  explicit ToyExtractor(const ToyConfig& cfg);

  const ToyConfig& config() const { return cfg_; }
  Tensor attention(const Image& img) const;
  Tensor embeddings(const Image& img) const;

 private:
  ToyConfig cfg_;
  Matrix<double> projection_;  // D x 3k^2
};

// Resolves manifest samples to validated FeatureBundles.
class FeatureProvider {
 public:
  FeatureProvider(const DatasetManifest& manifest, FeatureMode mode, const ToyConfig& toy);

  FeatureMode mode() const { return mode_; }
  FeatureBundle fetch(std::string_view id) const;
  // Image at manifest resolution; used for rendering.
  Image image(std::string_view id) const;

 private:
  const DatasetManifest& manifest_;
  FeatureMode mode_;
  std::optional<ToyExtractor> toy_;
};

FeatureBundle fetch_features(const DatasetManifest& manifest, std::string_view id, FeatureMode mode,
                             const ToyConfig& cfg);

}  // namespace vaas

#endif  // VAAS_FEATURES_HPP_
