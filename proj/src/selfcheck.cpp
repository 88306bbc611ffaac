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

#include "vaas/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "vaas/fusion.hpp"
#include "vaas/losses.hpp"
#include "vaas/metrics.hpp"
#include "vaas/oracles.hpp"
#include "vaas/px_local.hpp"
#include "vaas/splitmix64.hpp"
#include "vaas/tensor.hpp"

namespace vaas {
namespace {

SuiteResult pass(std::string detail) { return {"", true, std::move(detail)}; }
SuiteResult fail(std::string detail) { return {"", false, std::move(detail)}; }

template <typename... Args>
std::string cat(Args&&... args) {
  std::ostringstream os;
  os.precision(6);
  (os << ... << args);
  return os.str();
}

// --- patch scores -----------------------------------------------------------

double compare_grid(SplitMix64& rng, Index rows, Index cols, Index dim, bool eight, bool clamp) {
  Matrix<double> e(rows * cols, dim);
  for (Index i = 0; i < e.size(); ++i) e.data()[i] = rng.symmetric();
  const PatchGridConfig cfg{32, eight ? Neighbourhood::kEight : Neighbourhood::kFour, clamp, 0.5};
  const Matrix<double> fast = patch_anomaly_grid(e, rows, cols, cfg);
  const Matrix<double> slow = oracle::patch_scores(e, rows, cols, eight, clamp);
  return (fast - slow).cwiseAbs().maxCoeff();
}

SuiteResult patch_bruteforce(const SelfcheckOptions& o) {
  SplitMix64 rng(o.seed ^ 0x5041544348ULL);
  double worst = 0.0;
  int cases = 0;
  // Every grid geometry up to 8x8, both neighbourhoods, both clamp modes.
  for (Index rows = 1; rows <= 8; ++rows) {
    for (Index cols = 1; cols <= 8; ++cols) {
      if (rows * cols < 2) continue;
      for (int mode = 0; mode < 4; ++mode) {
        worst = std::max(worst, compare_grid(rng, rows, cols, 8, mode & 1, mode & 2));
        ++cases;
      }
    }
  }
  for (int k = 0; k < o.patch_instances; ++k) {
    Index rows = 0;
    Index cols = 0;
    do {
      rows = 1 + static_cast<Index>(rng.below(8));
      cols = 1 + static_cast<Index>(rng.below(8));
    } while (rows * cols < 2);
    const Index dim = 1 + static_cast<Index>(rng.below(32));
    worst = std::max(worst, compare_grid(rng, rows, cols, dim, rng.below(2) == 0, rng.below(2) == 0));
    ++cases;
  }
  auto detail = cat(cases, " grids, max |fast - brute force| = ", worst);
  return worst <= 1e-6 ? pass(detail) : fail(detail);
}

// --- gradients ---------------------------------------------------------------

struct SegInstance {
  Vector<double> pred;
  Vector<double> target;
};

SegInstance seg_instance(SplitMix64& rng, Index n) {
  SegInstance s{Vector<double>(n), Vector<double>(n)};
  for (Index i = 0; i < n; ++i) {
    s.pred(i) = rng.uniform(0.05, 0.95);
    s.target(i) = rng.below(2) == 0 ? 0.0 : 1.0;
  }
  return s;
}

SuiteResult gradient_check(const SelfcheckOptions& o, const Vector<double>& x,
                           const std::function<double(const Vector<double>&)>& value,
                           const Vector<double>& analytic) {
  std::vector<Index> coords(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.size(); ++i) coords[static_cast<std::size_t>(i)] = i;
  const auto numeric = oracle::central_difference(value, x, o.gradient_step, coords);
  double worst = 0.0;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    worst = std::max(worst, oracle::relative_error(analytic(coords[k]), numeric[k]));
  }
  auto detail = cat(coords.size(), " coords, max rel err = ", worst, " (tol ", o.gradient_tolerance, ")");
  return worst < o.gradient_tolerance ? pass(detail) : fail(detail);
}

SuiteResult gradient_bce(const SelfcheckOptions& o) {
  SplitMix64 rng(o.seed ^ 0xBCEULL);
  const auto s = seg_instance(rng, 128);
  return gradient_check(
      o, s.pred, [&](const Vector<double>& p) { return bce_loss(p, s.target).value; },
      bce_loss(s.pred, s.target).gradient);
}

SuiteResult gradient_dice(const SelfcheckOptions& o) {
  SplitMix64 rng(o.seed ^ 0xD1CEULL);
  const auto s = seg_instance(rng, 128);
  return gradient_check(
      o, s.pred, [&](const Vector<double>& p) { return dice_loss(p, s.target, 1.0).value; },
      dice_loss(s.pred, s.target, 1.0).gradient);
}

SuiteResult gradient_focal(const SelfcheckOptions& o) {
  SplitMix64 rng(o.seed ^ 0xF0CA1ULL);
  const auto s = seg_instance(rng, 128);
  return gradient_check(
      o, s.pred, [&](const Vector<double>& p) { return focal_loss(p, s.target, 2.0).value; },
      focal_loss(s.pred, s.target, 2.0).gradient);
}

SuiteResult gradient_alignment(const SelfcheckOptions& o) {
  SplitMix64 rng(o.seed ^ 0xA11ULL);
  AlignmentFeatures<double> a{Vector<double>(256), Vector<double>(256)};
  for (Index i = 0; i < 256; ++i) {
    a.f_px(i) = rng.symmetric();
    a.f_fx(i) = rng.symmetric();
  }
  return gradient_check(
      o, a.f_px,
      [&](const Vector<double>& x) { return alignment_loss(AlignmentFeatures<double>{x, a.f_fx}).value; },
      alignment_loss(a).gradient);
}

SuiteResult focal_reduction(const SelfcheckOptions& o) {
  SplitMix64 rng(o.seed ^ 0xF0CA0ULL);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto s = seg_instance(rng, 1 + static_cast<Index>(rng.below(256)));
    worst = std::max(worst, std::abs(focal_loss(s.pred, s.target, 0.0).value - bce_loss(s.pred, s.target).value));
  }
  auto detail = cat("100 instances, max |focal(gamma=0) - bce| = ", worst);
  return worst <= 1e-9 ? pass(detail) : fail(detail);
}

// --- fusion ------------------------------------------------------------------

SuiteResult fusion_properties(const SelfcheckOptions& o) {
  SplitMix64 rng(o.seed ^ 0xF05EULL);
  int violations = 0;
  for (int k = 0; k < 10000; ++k) {
    const double f = rng.uniform();
    const double p = rng.uniform();
    const double alpha = rng.uniform();
    const double h = fuse_harmonic(f, p);
    const double w = fuse_weighted(f, p, alpha);
    if (h > fuse_weighted(f, p, 0.5)) ++violations;
    if (w < std::min(f, p) || w > std::max(f, p)) ++violations;
    if (h < 0.0 || h > 1.0 || w < 0.0 || w > 1.0) ++violations;
    if (fuse_weighted(f, f, alpha) != f || fuse_harmonic(f, f) != f) ++violations;
    if (fuse_weighted(f, p, 1.0) != f || fuse_weighted(f, p, 0.0) != p) ++violations;
    if (fuse_harmonic(f, p) != fuse_harmonic(p, f)) ++violations;
  }
  auto detail = cat("10000 points, ", violations, " violations");
  return violations == 0 ? pass(detail) : fail(detail);
}

// --- metrics -----------------------------------------------------------------

SuiteResult metric_identities(const SelfcheckOptions& o) {
  SplitMix64 rng(o.seed ^ 0x3E7ULL);
  int violations = 0;
  ConfusionCounts sum;
  std::vector<ConfusionCounts> tables;
  for (int k = 0; k < 10000; ++k) {
    ConfusionCounts c{rng.below(1000), rng.below(1000), rng.below(1000), rng.below(1000)};
    if (k % 7 == 0) c.tp = 0;
    const Metrics m = metrics(c);
    const double identity = 2.0 * m.iou / (1.0 + m.iou);
    if (std::abs(m.f1 - identity) > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, m.f1)) {
      ++violations;
    }
    sum += c;
    tables.push_back(c);
  }
  ConfusionCounts folded;
  for (const auto& c : tables) folded += c;
  const Metrics a = metrics(sum);
  const Metrics b = metrics(folded);
  if (a.precision != b.precision || a.recall != b.recall || a.f1 != b.f1 || a.iou != b.iou) ++violations;

  for (int k = 0; k < 100; ++k) {
    Mask pred(64, 64);
    Mask truth(64, 64);
    for (Index i = 0; i < pred.size(); ++i) {
      pred.data()[i] = static_cast<std::uint8_t>(rng.below(2));
      truth.data()[i] = static_cast<std::uint8_t>(rng.below(2));
    }
    const ConfusionCounts c = confusion(pred, truth);
    const oracle::Counts n = oracle::count_pixels(pred, truth);
    if (c.tp != n.tp || c.fp != n.fp || c.fn != n.fn || c.tn != n.tn) ++violations;
  }
  auto detail = cat("10000 tables + 100 mask pairs, ", violations, " violations");
  return violations == 0 ? pass(detail) : fail(detail);
}

// --- tensors -----------------------------------------------------------------

SuiteResult tensor_roundtrip(const SelfcheckOptions& o) {
  SplitMix64 rng(o.seed ^ 0x7E45ULL);
  int violations = 0;
  for (int k = 0; k < o.tensor_instances; ++k) {
    const std::size_t ndim = 1 + rng.below(kMaxTensorRank);
    std::vector<std::uint64_t> shape(ndim);
    std::uint64_t numel = 1;
    for (auto& d : shape) {
      d = 1 + rng.below(ndim <= 3 ? 12 : 3);
      numel *= d;
    }
    std::vector<float> data(numel);
    for (auto& v : data) {
      const double scale = std::pow(10.0, static_cast<double>(rng.below(20)) - 10.0);
      v = static_cast<float>(rng.symmetric() * scale);
    }
    data[0] = k % 3 == 0 ? -0.0f : data[0];
    if (numel > 1 && k % 5 == 0) data[1] = std::numeric_limits<float>::denorm_min();
    const Tensor t(shape, data);
    std::stringstream buf;
    const std::size_t written = write_tensor(t, buf);
    const std::string bytes = buf.str();
    if (written != 8 + 8 * ndim + 4 * numel || bytes.size() != written) ++violations;
    std::stringstream in(bytes);
    if (!(read_tensor(in) == t)) ++violations;

    auto rejects = [](std::string b) {
      std::stringstream s(b);
      try {
        read_tensor(s);
      } catch (const DataError&) {
        return true;
      }
      return false;
    };
    std::string corrupted = bytes;
    corrupted[static_cast<std::size_t>(rng.below(4))] ^= 0x20;
    if (!rejects(corrupted)) ++violations;
    if (!rejects(bytes.substr(0, bytes.size() - 1 - rng.below(4)))) ++violations;
    if (!rejects(bytes + '\0')) ++violations;
  }
  auto detail = cat(o.tensor_instances, " tensors, ", violations, " violations");
  return violations == 0 ? pass(detail) : fail(detail);
}

const std::map<std::string, std::function<SuiteResult(const SelfcheckOptions&)>, std::less<>>& registry() {
  static const std::map<std::string, std::function<SuiteResult(const SelfcheckOptions&)>, std::less<>> r = {
      {"focal-reduction", focal_reduction},
      {"fusion-properties", fusion_properties},
      {"gradient-alignment", gradient_alignment},
      {"gradient-bce", gradient_bce},
      {"gradient-dice", gradient_dice},
      {"gradient-focal", gradient_focal},
      {"metric-identities", metric_identities},
      {"patch-bruteforce", patch_bruteforce},
      {"tensor-roundtrip", tensor_roundtrip},
  };
  return r;
}

}  // namespace

std::vector<std::string> selfcheck_suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

SuiteResult run_suite(std::string_view name, const SelfcheckOptions& opts) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ValidationError("unknown selfcheck suite: " + std::string(name));
  SuiteResult r;
  try {
    r = it->second(opts);
  } catch (const std::exception& e) {
    r = fail(std::string("exception: ") + e.what());
  }
  r.name = it->first;
  return r;
}

std::vector<SuiteResult> run_selfcheck(const SelfcheckOptions& opts) {
  std::vector<SuiteResult> out;
  for (const auto& name : selfcheck_suite_names()) out.push_back(run_suite(name, opts));
  return out;
}

}  // namespace vaas
