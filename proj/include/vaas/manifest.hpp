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

// Dataset manifests: JSON documents listing samples, labels and the
// per-sample artifact paths (image, mask, exported tensors).
//
//   {"meta": {"image_size": [H, W], "patch_size": P, "embed_dim": D},
//    "samples": [{"id": "...", "image_path": "...", "label": "authentic"|"tampered",
//                 "mask_path": "...", "attention_path": "...", "embeddings_path": "..."}]}
//
// Relative paths are resolved against the manifest's directory.

#ifndef VAAS_MANIFEST_HPP_
#define VAAS_MANIFEST_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vaas {

enum class Label { kAuthentic, kTampered };

std::string_view to_string(Label label);
Label parse_label(std::string_view text);

struct ManifestMeta {
  int image_rows = 224;
  int image_cols = 224;
  int patch_size = 32;
  int embed_dim = 256;

  int grid_rows() const { return image_rows / patch_size; }
  int grid_cols() const { return image_cols / patch_size; }
};

struct SampleEntry {
  std::string id;
  std::filesystem::path image_path;
  Label label = Label::kAuthentic;
  std::optional<std::filesystem::path> mask_path;
  std::optional<std::filesystem::path> attention_path;
  std::optional<std::filesystem::path> embeddings_path;
};

struct DatasetManifest {
  ManifestMeta meta;
  std::vector<SampleEntry> samples;
  // Directory used to resolve relative sample paths.
  std::filesystem::path base_dir;

  // nullptr when absent.
  const SampleEntry* find(std::string_view id) const;
  // Throws ValidationError when absent.
  const SampleEntry& at(std::string_view id) const;
  std::filesystem::path resolve(const std::filesystem::path& p) const;
  std::size_t count(Label label) const;
};

// Throws ValidationError on malformed JSON, schema violations, duplicate ids
// or an image size that is not a multiple of the patch size.
DatasetManifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir);
DatasetManifest load_manifest(const std::filesystem::path& path);

// Paths are written as given (relative paths stay relative).
std::string dump_manifest(const DatasetManifest& manifest);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

}  // namespace vaas

#endif  // VAAS_MANIFEST_HPP_
