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

#include "vaas/core.hpp"
#include "vaas/manifest.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace vaas {
namespace {

constexpr const char* kThreeSamples = R"({
  "meta": {"image_size": [224, 224], "patch_size": 32, "embed_dim": 256},
  "samples": [
    {"id": "a1", "image_path": "img/a1.png", "label": "authentic"},
    {"id": "a2", "image_path": "img/a2.png", "label": "authentic"},
    {"id": "t1", "image_path": "img/t1.png", "label": "tampered", "mask_path": "mask/t1.png",
     "attention_path": "feat/t1_att.vast", "embeddings_path": "feat/t1_emb.vast"}
  ]
})";

TEST(Manifest, ThreeSamplesPreserveOrderAndLabels) {
  const auto m = parse_manifest(kThreeSamples, "/data");
  ASSERT_EQ(m.samples.size(), 3u);
  EXPECT_EQ(m.samples[0].id, "a1");
  EXPECT_EQ(m.samples[1].label, Label::kAuthentic);
  EXPECT_EQ(m.samples[2].label, Label::kTampered);
  EXPECT_EQ(m.count(Label::kAuthentic), 2u);
  EXPECT_EQ(m.count(Label::kTampered), 1u);
  EXPECT_FALSE(m.samples[0].mask_path.has_value());
  EXPECT_EQ(*m.samples[2].mask_path, "mask/t1.png");
  EXPECT_EQ(m.resolve(*m.samples[2].attention_path), std::filesystem::path("/data/feat/t1_att.vast"));
  EXPECT_EQ(m.resolve("/abs/x.png"), std::filesystem::path("/abs/x.png"));
}

TEST(Manifest, ViTGeometryAccepted) {
  const auto m = parse_manifest(kThreeSamples, ".");
  EXPECT_EQ(m.meta.image_rows, 224);
  EXPECT_EQ(m.meta.patch_size, 32);
  EXPECT_EQ(m.meta.grid_rows(), 7);
  EXPECT_EQ(m.meta.grid_cols(), 7);
  EXPECT_EQ(m.meta.embed_dim, 256);
}

TEST(Manifest, DuplicateIdRejected) {
  const char* text = R"({"meta": {"image_size": [64, 64], "patch_size": 32, "embed_dim": 8},
    "samples": [{"id": "s1", "image_path": "a.png", "label": "authentic"},
                {"id": "s1", "image_path": "b.png", "label": "tampered"}]})";
  try {
    parse_manifest(text, ".");
    FAIL() << "duplicate id accepted";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("duplicate"), std::string::npos);
  }
}

TEST(Manifest, IndivisibleImageSizeRejected) {
  const char* text = R"({"meta": {"image_size": [224, 200], "patch_size": 32, "embed_dim": 8}, "samples": []})";
  EXPECT_THROW(parse_manifest(text, "."), ValidationError);
}

TEST(Manifest, MalformedInputsRejected) {
  EXPECT_THROW(parse_manifest("{not json", "."), ValidationError);
  EXPECT_THROW(parse_manifest(R"({"samples": []})", "."), ValidationError);
  const char* bad_label = R"({"meta": {"image_size": [32, 32], "patch_size": 32, "embed_dim": 8},
    "samples": [{"id": "x", "image_path": "x.png", "label": "fake"}]})";
  EXPECT_THROW(parse_manifest(bad_label, "."), ValidationError);
  const char* empty_path = R"({"meta": {"image_size": [32, 32], "patch_size": 32, "embed_dim": 8},
    "samples": [{"id": "x", "image_path": "x.png", "label": "authentic", "mask_path": ""}]})";
  EXPECT_THROW(parse_manifest(empty_path, "."), ValidationError);
  EXPECT_THROW(load_manifest("/nonexistent/manifest.json"), ValidationError);
}

TEST(Manifest, LookupById) {
  const auto m = parse_manifest(kThreeSamples, ".");
  EXPECT_EQ(m.find("t1"), &m.samples[2]);
  EXPECT_EQ(m.find("zzz"), nullptr);
  EXPECT_THROW(m.at("zzz"), ValidationError);
}

TEST(Manifest, DumpLoadIsIdempotent) {
  testing::ScratchDir dir("manifest");
  const auto m = parse_manifest(kThreeSamples, dir.path());
  save_manifest(m, dir / "m.json");
  const auto again = load_manifest(dir / "m.json");
  EXPECT_EQ(dump_manifest(again), dump_manifest(m));
  save_manifest(again, dir / "m2.json");
  EXPECT_EQ(testing::slurp(dir / "m.json"), testing::slurp(dir / "m2.json"));
  EXPECT_EQ(again.base_dir, dir.path());
}

}  // namespace
}  // namespace vaas
