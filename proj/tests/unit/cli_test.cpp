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

// Drives the built `vaas` binary through std::system and inspects the
// artifacts it leaves behind.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "vaas/image.hpp"
#include "vaas/manifest.hpp"

namespace vaas {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::ScratchDir("cli");
    const CliRun r = run("synth --out-dir " + q(data()) + " --authentic 10 --tampered 4");
    ASSERT_EQ(r.code, 0) << r.err;
    const CliRun c = run("calibrate --manifest " + q(manifest()) + " --out " + q(ref()));
    ASSERT_EQ(c.code, 0) << c.err;
  }
  static void TearDownTestSuite() { delete dir_; }

  static std::string q(const fs::path& p) { return "'" + p.string() + "'"; }
  static fs::path data() { return dir_->path() / "data"; }
  static fs::path manifest() { return data() / "manifest.json"; }
  static fs::path ref() { return dir_->path() / "ref.json"; }
  static fs::path path(const std::string& name) { return dir_->path() / name; }

  static CliRun run(const std::string& args) {
    static int counter = 0;
    const fs::path out = dir_->path() / ("stdout_" + std::to_string(counter));
    const fs::path err = dir_->path() / ("stderr_" + std::to_string(counter++));
    const std::string cmd = std::string(VAAS_CLI_PATH) + " " + args + " >" + q(out) + " 2>" + q(err);
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = testing::slurp(out);
    r.err = testing::slurp(err);
    return r;
  }

  static std::vector<std::vector<std::string>> csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(testing::slurp(p));
    std::string line;
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      rows.push_back(cells);
    }
    return rows;
  }

  // Writes a copy of the dataset manifest keeping only `ids`, optionally
  // dropping the mask of every tampered sample.
  static fs::path manifest_subset(const std::string& name, std::initializer_list<std::string> ids,
                                  bool drop_masks = false) {
    const auto full = load_manifest(manifest());
    DatasetManifest m;
    m.meta = full.meta;
    m.base_dir = full.base_dir;
    for (const auto& id : ids) {
      m.samples.push_back(full.at(id));
      if (drop_masks) m.samples.back().mask_path.reset();
    }
    const fs::path p = data() / name;
    save_manifest(m, p);
    return p;
  }

  static testing::ScratchDir* dir_;
};

testing::ScratchDir* CliTest::dir_ = nullptr;

TEST_F(CliTest, CalibrateReportsTenSamples) {
  const std::string json = testing::slurp(ref());
  EXPECT_NE(json.find("\"n_samples\": 10"), std::string::npos) << json;
  const CliRun r = run("calibrate --manifest " + q(manifest()) + " --out " + q(path("ref2.json")));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("n_samples=10"), std::string::npos);
  EXPECT_NE(r.out.find("mu_ref="), std::string::npos);
  EXPECT_NE(r.out.find("sigma_ref="), std::string::npos);
}

TEST_F(CliTest, CalibrateIsDeterministic) {
  ASSERT_EQ(run("calibrate --manifest " + q(manifest()) + " --out " + q(path("ref3.json"))).code, 0);
  EXPECT_EQ(testing::slurp(ref()), testing::slurp(path("ref3.json")));
}

TEST_F(CliTest, CalibrateNeedsTwoAuthenticSamples) {
  const auto m = manifest_subset("one_auth.json", {"auth_000", "tamp_000"});
  const CliRun r = run("calibrate --manifest " + q(m) + " --out " + q(path("never.json")));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("need >= 2 authentic samples"), std::string::npos) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  EXPECT_FALSE(fs::exists(path("never.json")));
}

TEST_F(CliTest, WeightedScoresFollowAlpha) {
  const CliRun r = run("score --manifest " + q(manifest()) + " --ref " + q(ref()) +
                    " --alpha 0.6 --fusion weighted --out " + q(path("scores.csv")));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(path("scores.csv"));
  ASSERT_EQ(rows.size(), 15u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"id", "label", "s_f_raw", "s_f", "s_p", "s_h", "mode", "alpha"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double sf = std::stod(rows[i][3]);
    const double sp = std::stod(rows[i][4]);
    EXPECT_NEAR(std::stod(rows[i][5]), 0.6 * sf + 0.4 * sp, 1e-12);
  }
}

TEST_F(CliTest, HarmonicScoresIgnoreAlpha) {
  const std::string base = "score --manifest " + q(manifest()) + " --ref " + q(ref()) + " --fusion harmonic";
  ASSERT_EQ(run(base + " --alpha 0.2 --out " + q(path("h1.csv"))).code, 0);
  ASSERT_EQ(run(base + " --alpha 0.9 --out " + q(path("h2.csv"))).code, 0);
  const auto a = csv(path("h1.csv"));
  const auto b = csv(path("h2.csv"));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_EQ(a[i][5], b[i][5]);
}

TEST_F(CliTest, SweepEmitsElevenRowsPerMode) {
  const CliRun r = run("sweep --manifest " + q(manifest()) + " --ref " + q(ref()) +
                    " --alpha-min 0.3 --alpha-max 0.8 --alpha-step 0.05 --out " + q(path("sweep.csv")));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(path("sweep.csv"));
  ASSERT_EQ(rows.size(), 23u);
  int weighted = 0;
  int harmonic = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    weighted += rows[i][1] == "weighted";
    harmonic += rows[i][1] == "harmonic";
  }
  EXPECT_EQ(weighted, 11);
  EXPECT_EQ(harmonic, 11);
  EXPECT_EQ(rows[1][0], "0.3");
  EXPECT_EQ(rows[11][0], "0.8");
}

TEST_F(CliTest, EvaluateWritesJsonAndCsv) {
  const CliRun r = run("evaluate --manifest " + q(manifest()) + " --ref " + q(ref()) + " --out " +
                    q(path("report.json")));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path("report.json")));
  EXPECT_EQ(csv(path("report.csv")).size(), 15u);
}

TEST_F(CliTest, FailedEvaluateLeavesNoOutputs) {
  const auto m = manifest_subset("nomask.json", {"auth_000", "tamp_001"}, true);
  const CliRun r = run("evaluate --manifest " + q(m) + " --ref " + q(ref()) + " --out " + q(path("bad.json")));
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(fs::exists(path("bad.json")));
  EXPECT_FALSE(fs::exists(path("bad.csv")));
}

TEST_F(CliTest, RenderIsDeterministic) {
  const std::string base = "render --manifest " + q(manifest()) + " --ref " + q(ref()) +
                           " --id auth_001 --id tamp_002 --out-dir ";
  ASSERT_EQ(run(base + q(path("r1"))).code, 0);
  ASSERT_EQ(run(base + q(path("r2"))).code, 0);
  for (const char* id : {"auth_001.png", "tamp_002.png"}) {
    const std::string a = testing::slurp(path("r1") / id);
    ASSERT_FALSE(a.empty());
    EXPECT_EQ(a, testing::slurp(path("r2") / id));
  }
  const Rgb8 img = read_raster(path("r1") / "tamp_002.png");
  EXPECT_EQ(img.cols, 6 * 224 + 7 * 4);
  EXPECT_GT(img.rows, 224);
}

TEST_F(CliTest, RenderWithoutMaskWarns) {
  const auto m = manifest_subset("render_nomask.json", {"tamp_003"}, true);
  const CliRun r = run("render --manifest " + q(m) + " --ref " + q(ref()) + " --out-dir " + q(path("r3")));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("r3") / "tamp_003.png"));
}

TEST_F(CliTest, SelfcheckPassesAndListsSortedSuites) {
  const CliRun r = run("selfcheck");
  EXPECT_EQ(r.code, 0) << r.out;
  std::istringstream in(r.out);
  std::string line;
  std::vector<std::string> names;
  while (std::getline(in, line)) {
    EXPECT_EQ(line.rfind("PASS ", 0), 0u) << line;
    names.push_back(line.substr(5, line.find(':') - 5));
  }
  EXPECT_GE(names.size(), 5u);
  EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
}

TEST_F(CliTest, SelfcheckTinyGradientToleranceFails) {
  const CliRun r = run("selfcheck --grad-tol 1e-12");
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("FAIL gradient-focal"), std::string::npos);
  EXPECT_NE(r.err.find("gradient-focal"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run("score --bogus").code, 1);
  EXPECT_EQ(run("score --manifest " + q(manifest()) + " --ref " + q(path("missing.json")) + " --out " +
                q(path("x.csv")))
                .code,
            1);
  EXPECT_EQ(run("score --manifest " + q(manifest()) + " --ref " + q(ref()) + " --alpha 2 --out " +
                q(path("x.csv")))
                .code,
            1);
  // A corrupt image is a data failure.
  auto parsed = load_manifest(manifest_subset("corrupt.json", {"auth_000", "auth_001"}));
  testing::spit(data() / "corrupt.png", "not a png");
  parsed.samples[0].image_path = "corrupt.png";
  const fs::path m = data() / "corrupt.json";
  save_manifest(parsed, m);
  const CliRun r = run("calibrate --manifest " + q(m) + " --out " + q(path("corrupt_ref.json")));
  EXPECT_EQ(r.code, 2) << r.err;
  EXPECT_FALSE(fs::exists(path("corrupt_ref.json")));
  EXPECT_FALSE(fs::exists(path("x.csv")));
}

}  // namespace
}  // namespace vaas
