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

#include "vaas/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vaas/core.hpp"

namespace vaas {
namespace {

using nlohmann::json;

std::optional<std::filesystem::path> optional_path(const json& j, const char* key,
                                                   const std::string& id) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_string()) {
    throw ValidationError("sample '" + id + "': " + key + " must be a string");
  }
  const auto s = j.at(key).get<std::string>();
  if (s.empty()) throw ValidationError("sample '" + id + "': " + key + " is empty");
  return std::filesystem::path(s);
}

int positive_int(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 1 || j.get<long long>() > (1 << 20)) {
    throw ValidationError(std::string("meta.") + what + " must be a positive integer");
  }
  return j.get<int>();
}

}  // namespace

std::string_view to_string(Label label) {
  return label == Label::kAuthentic ? "authentic" : "tampered";
}

Label parse_label(std::string_view text) {
  if (text == "authentic") return Label::kAuthentic;
  if (text == "tampered") return Label::kTampered;
  throw ValidationError("label must be \"authentic\" or \"tampered\", got \"" + std::string(text) + "\"");
}

const SampleEntry* DatasetManifest::find(std::string_view id) const {
  for (const auto& s : samples) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

const SampleEntry& DatasetManifest::at(std::string_view id) const {
  const SampleEntry* s = find(id);
  if (s == nullptr) throw ValidationError("sample id not found: " + std::string(id));
  return *s;
}

std::filesystem::path DatasetManifest::resolve(const std::filesystem::path& p) const {
  return p.is_absolute() ? p : base_dir / p;
}

std::size_t DatasetManifest::count(Label label) const {
  std::size_t n = 0;
  for (const auto& s : samples) n += s.label == label ? 1 : 0;
  return n;
}

DatasetManifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed manifest JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("meta") || !doc.contains("samples")) {
    throw ValidationError("manifest must be an object with \"meta\" and \"samples\"");
  }

  DatasetManifest m;
  m.base_dir = base_dir;
  const json& meta = doc.at("meta");
  if (!meta.is_object()) throw ValidationError("manifest meta must be an object");
  const json& size = meta.value("image_size", json());
  if (!size.is_array() || size.size() != 2) {
    throw ValidationError("meta.image_size must be [H, W]");
  }
  m.meta.image_rows = positive_int(size[0], "image_size[0]");
  m.meta.image_cols = positive_int(size[1], "image_size[1]");
  m.meta.patch_size = positive_int(meta.value("patch_size", json()), "patch_size");
  m.meta.embed_dim = positive_int(meta.value("embed_dim", json()), "embed_dim");
  if (m.meta.image_rows % m.meta.patch_size != 0 || m.meta.image_cols % m.meta.patch_size != 0) {
    throw ValidationError("meta.image_size must be divisible by patch_size");
  }

  const json& samples = doc.at("samples");
  if (!samples.is_array()) throw ValidationError("manifest samples must be an array");
  std::set<std::string> seen;
  for (const json& s : samples) {
    if (!s.is_object()) throw ValidationError("manifest sample must be an object");
    SampleEntry e;
    if (!s.contains("id") || !s.at("id").is_string() || s.at("id").get<std::string>().empty()) {
      throw ValidationError("sample id must be a non-empty string");
    }
    e.id = s.at("id").get<std::string>();
    if (!seen.insert(e.id).second) throw ValidationError("duplicate sample id: " + e.id);
    if (!s.contains("label") || !s.at("label").is_string()) {
      throw ValidationError("sample '" + e.id + "': missing label");
    }
    e.label = parse_label(s.at("label").get<std::string>());
    auto image = optional_path(s, "image_path", e.id);
    if (!image) throw ValidationError("sample '" + e.id + "': missing image_path");
    e.image_path = *image;
    e.mask_path = optional_path(s, "mask_path", e.id);
    e.attention_path = optional_path(s, "attention_path", e.id);
    e.embeddings_path = optional_path(s, "embeddings_path", e.id);
    m.samples.push_back(std::move(e));
  }
  return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open manifest " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), path.parent_path());
}

std::string dump_manifest(const DatasetManifest& manifest) {
  json doc;
  doc["meta"] = {{"image_size", {manifest.meta.image_rows, manifest.meta.image_cols}},
                 {"patch_size", manifest.meta.patch_size},
                 {"embed_dim", manifest.meta.embed_dim}};
  json samples = json::array();
  for (const auto& s : manifest.samples) {
    json e = {{"id", s.id}, {"image_path", s.image_path.generic_string()},
              {"label", std::string(to_string(s.label))}};
    if (s.mask_path) e["mask_path"] = s.mask_path->generic_string();
    if (s.attention_path) e["attention_path"] = s.attention_path->generic_string();
    if (s.embeddings_path) e["embeddings_path"] = s.embeddings_path->generic_string();
    samples.push_back(std::move(e));
  }
  doc["samples"] = std::move(samples);
  return doc.dump(2) + "\n";
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << dump_manifest(manifest);
}

}  // namespace vaas
