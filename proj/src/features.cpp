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

#include "vaas/features.hpp"

#include <cmath>
#include <string>

#include "vaas/splitmix64.hpp"

namespace vaas {
namespace {

struct CellStats {
  double mean;
  double stddev;
};

CellStats cell_stats(const Matrix<float>& gray, Index r0, Index c0, Index rows, Index cols) {
  const auto block = gray.block(r0, c0, rows, cols).cast<double>();
  const double mean = block.mean();
  const double var = (block.array() - mean).square().mean();
  return {mean, std::sqrt(var)};
}

int infer_square_grid(Index tokens) {
  for (Index g = 1; g * g <= tokens; ++g) {
    if (g * g == tokens || g * g + 1 == tokens) return static_cast<int>(g);
  }
  throw DataError("attention token count " + std::to_string(tokens) +
                  " is neither a square grid nor a square grid plus a class token");
}

}  // namespace

FeatureMode parse_feature_mode(std::string_view text) {
  if (text == "file") return FeatureMode::kFile;
  if (text == "toy") return FeatureMode::kToy;
  throw ValidationError("provider mode must be \"file\" or \"toy\"");
}

void ToyConfig::validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ValidationError("toy temperature must be > 0");
  }
  if (embed_dim < 1) throw ValidationError("toy embed_dim must be >= 1");
  if (patch_size < 1) throw ValidationError("toy patch_size must be >= 1");
  if (token_rows < 1 || token_cols < 1 || kToyInputSize % token_rows != 0 ||
      kToyInputSize % token_cols != 0) {
    throw ValidationError("toy token grid must divide 224");
  }
}

void validate_bundle(const FeatureBundle& b, const ManifestMeta& meta) {
  const Tensor& a = b.attention;
  if (a.ndim() != 4 || a.dim(2) != a.dim(3)) throw DataError("attention must have shape [L, H, T, T]");
  const Index tokens = static_cast<Index>(a.dim(3));
  const Index grid_tokens = Index{b.token_rows} * b.token_cols;
  if (tokens != grid_tokens && tokens != grid_tokens + 1) {
    throw DataError("attention token count does not match the token grid");
  }
  const std::size_t n_rows = a.numel() / static_cast<std::size_t>(tokens);
  for (std::size_t row = 0; row < n_rows; ++row) {
    const float* p = a.data().data() + row * static_cast<std::size_t>(tokens);
    double sum = 0.0;
    for (Index j = 0; j < tokens; ++j) {
      if (p[j] < 0.0f) throw DataError("attention has negative entries");
      sum += p[j];
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw DataError("attention rows must sum to 1 (row " + std::to_string(row) + " sums to " +
                      std::to_string(sum) + ")");
    }
  }

  const Tensor& e = b.embeddings;
  if (e.ndim() != 2) throw DataError("embeddings must have shape [M, D]");
  if (b.grid_rows != meta.grid_rows() || b.grid_cols != meta.grid_cols() ||
      e.dim(0) != static_cast<std::uint64_t>(b.grid_rows) * static_cast<std::uint64_t>(b.grid_cols)) {
    throw DataError("embeddings shape mismatch: expected " +
                    std::to_string(meta.grid_rows() * meta.grid_cols()) + " patches, got " +
                    std::to_string(e.dim(0)));
  }
  if (e.dim(1) != static_cast<std::uint64_t>(meta.embed_dim)) {
    throw DataError("embeddings shape mismatch: expected dim " + std::to_string(meta.embed_dim) +
                    ", got " + std::to_string(e.dim(1)));
  }
  if (b.image_rows != meta.image_rows || b.image_cols != meta.image_cols) {
    throw DataError("bundle image size does not match manifest meta");
  }
}

ToyExtractor::ToyExtractor(const ToyConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const Index width = 3 * Index{cfg_.patch_size} * cfg_.patch_size;
  projection_.resize(cfg_.embed_dim, width);
  SplitMix64 rng(cfg_.seed);
  for (Index r = 0; r < projection_.rows(); ++r) {
    for (Index c = 0; c < width; ++c) projection_(r, c) = rng.symmetric();
  }
}

Tensor toy_attention(const Image& img, const ToyConfig& cfg) {
  cfg.validate();
  if (img.rows() != kToyInputSize || img.cols() != kToyInputSize) {
    throw ValidationError("toy attention needs a 224x224 image, got " + std::to_string(img.rows()) +
                          "x" + std::to_string(img.cols()));
  }
  const Matrix<float> gray = img.grayscale();
  const Index cell_r = kToyInputSize / cfg.token_rows;
  const Index cell_c = kToyInputSize / cfg.token_cols;
  const Index offset = cfg.cls_token ? 1 : 0;
  const Index tokens = Index{cfg.token_rows} * cfg.token_cols + offset;

  Matrix<double> feat(tokens, 2);
  if (cfg.cls_token) {
    const CellStats s = cell_stats(gray, 0, 0, gray.rows(), gray.cols());
    feat.row(0) << s.mean, s.stddev;
  }
  for (Index tr = 0; tr < cfg.token_rows; ++tr) {
    for (Index tc = 0; tc < cfg.token_cols; ++tc) {
      const CellStats s = cell_stats(gray, tr * cell_r, tc * cell_c, cell_r, cell_c);
      feat.row(offset + tr * cfg.token_cols + tc) << s.mean, s.stddev;
    }
  }

  std::vector<float> data(static_cast<std::size_t>(tokens * tokens));
  Vector<double> row(tokens);
  for (Index i = 0; i < tokens; ++i) {
    for (Index j = 0; j < tokens; ++j) {
      row(j) = std::exp(-(feat.row(i) - feat.row(j)).squaredNorm() / cfg.temperature);
    }
    row /= row.sum();
    for (Index j = 0; j < tokens; ++j) data[static_cast<std::size_t>(i * tokens + j)] = static_cast<float>(row(j));
  }
  const auto t = static_cast<std::uint64_t>(tokens);
  return Tensor({1, 1, t, t}, std::move(data));
}

Tensor ToyExtractor::embeddings(const Image& img) const {
  const Index k = cfg_.patch_size;
  if (img.rows() % k != 0 || img.cols() % k != 0) {
    throw ValidationError("image dims " + std::to_string(img.rows()) + "x" + std::to_string(img.cols()) +
                          " not divisible by patch size " + std::to_string(k));
  }
  const Index grid_r = img.rows() / k;
  const Index grid_c = img.cols() / k;
  const Index m = grid_r * grid_c;

  Matrix<double> patches(m, 3 * k * k);
  for (Index pr = 0; pr < grid_r; ++pr) {
    for (Index pc = 0; pc < grid_c; ++pc) {
      auto x = patches.row(pr * grid_c + pc);
      Index idx = 0;
      for (Index y = 0; y < k; ++y) {
        for (Index xx = 0; xx < k; ++xx) {
          for (int ch = 0; ch < 3; ++ch) x(idx++) = img.channel(ch)(pr * k + y, pc * k + xx);
        }
      }
    }
  }

  Matrix<double> emb = patches * projection_.transpose();
  const Vector<double> constant_dir = projection_.rowwise().sum().normalized();
  for (Index i = 0; i < m; ++i) {
    const double n = emb.row(i).norm();
    if (n > 0.0) {
      emb.row(i) /= n;
    } else {
      emb.row(i) = constant_dir.transpose();
    }
  }
  return to_tensor(emb);
}

Tensor ToyExtractor::attention(const Image& img) const { return toy_attention(img, cfg_); }

Tensor toy_patch_embeddings(const Image& img, const ToyConfig& cfg) {
  return ToyExtractor(cfg).embeddings(img);
}

FeatureProvider::FeatureProvider(const DatasetManifest& manifest, FeatureMode mode, const ToyConfig& toy)
    : manifest_(manifest), mode_(mode) {
  if (mode_ == FeatureMode::kToy) {
    if (toy.patch_size != manifest.meta.patch_size || toy.embed_dim != manifest.meta.embed_dim) {
      throw ValidationError("toy patch_size/embed_dim must match manifest meta");
    }
    toy_.emplace(toy);
  }
}

Image FeatureProvider::image(std::string_view id) const {
  const SampleEntry& s = manifest_.at(id);
  return resize_bilinear(load_image(manifest_.resolve(s.image_path)), manifest_.meta.image_rows,
                         manifest_.meta.image_cols);
}

FeatureBundle FeatureProvider::fetch(std::string_view id) const {
  const SampleEntry& s = manifest_.at(id);
  const ManifestMeta& meta = manifest_.meta;
  FeatureBundle b;
  b.grid_rows = meta.grid_rows();
  b.grid_cols = meta.grid_cols();
  b.image_rows = meta.image_rows;
  b.image_cols = meta.image_cols;

  if (mode_ == FeatureMode::kFile) {
    if (!s.attention_path || !s.embeddings_path) {
      throw ValidationError("sample '" + s.id + "' lacks attention_path/embeddings_path for file mode");
    }
    b.attention = load_tensor(manifest_.resolve(*s.attention_path));
    b.embeddings = load_tensor(manifest_.resolve(*s.embeddings_path));
    if (b.attention.ndim() != 4 || b.attention.dim(2) != b.attention.dim(3)) {
      throw DataError("sample '" + s.id + "': attention must have shape [L, H, T, T]");
    }
    b.token_rows = b.token_cols = infer_square_grid(static_cast<Index>(b.attention.dim(3)));
  } else {
    const Image img = image(id);
    b.embeddings = toy_->embeddings(img);
    b.attention = toy_->attention(resize_bilinear(img, kToyInputSize, kToyInputSize));
    b.token_rows = toy_->config().token_rows;
    b.token_cols = toy_->config().token_cols;
  }
  try {
    validate_bundle(b, meta);
  } catch (const DataError& e) {
    throw DataError("sample '" + s.id + "': " + e.what());
  }
  return b;
}

FeatureBundle fetch_features(const DatasetManifest& manifest, std::string_view id, FeatureMode mode,
                             const ToyConfig& cfg) {
  return FeatureProvider(manifest, mode, cfg).fetch(id);
}

}  // namespace vaas
