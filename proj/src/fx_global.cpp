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

#include "vaas/fx_global.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vaas/fusion.hpp"
#include "vaas/resample.hpp"

namespace vaas {

void ReferenceStats::validate() const {
  if (!std::isfinite(mu_ref) || !std::isfinite(sigma_ref) || !(sigma_ref > 0.0)) {
    throw ValidationError("reference stats: sigma_ref must be > 0");
  }
  if (!std::isfinite(raw_p01) || !std::isfinite(raw_p99) || raw_p01 > raw_p99) {
    throw ValidationError("reference stats: raw_p01 must not exceed raw_p99");
  }
  if (n_samples < 2) throw ValidationError("reference stats: n_samples must be >= 2");
}

AttentionMap aggregate_attention(const Tensor& attention, int token_rows, int token_cols,
                                 int image_rows, int image_cols, int last_k) {
  if (last_k < 1) throw ValidationError("last_k must be >= 1");
  if (attention.ndim() != 4 || attention.dim(2) != attention.dim(3)) {
    throw DataError("attention must have shape [L, H, T, T]");
  }
  const auto layers = static_cast<Index>(attention.dim(0));
  const auto heads = static_cast<Index>(attention.dim(1));
  const auto tokens = static_cast<Index>(attention.dim(2));
  const Index grid = Index{token_rows} * token_cols;
  if (tokens != grid && tokens != grid + 1) {
    throw DataError("attention has " + std::to_string(tokens) + " tokens but the grid holds " +
                    std::to_string(grid));
  }
  const Index first = layers - std::min<Index>(last_k, layers);
  const Index plane = tokens * tokens;

  Matrix<double> mean = Matrix<double>::Zero(tokens, tokens);
  for (Index l = first; l < layers; ++l) {
    for (Index h = 0; h < heads; ++h) {
      const float* p = attention.data().data() + (l * heads + h) * plane;
      mean += Eigen::Map<const Matrix<float>>(p, tokens, tokens).cast<double>();
    }
  }
  mean /= static_cast<double>((layers - first) * heads);

  const Vector<double> received = mean.bottomRightCorner(grid, grid).colwise().mean().transpose();
  const Matrix<double> field = received.reshaped<Eigen::RowMajor>(token_rows, token_cols);

  AttentionMap out;
  out.source_rows = token_rows;
  out.source_cols = token_cols;
  out.values = resize_bilinear(field, image_rows, image_cols);
  return out;
}

AttentionMap aggregate_attention(const FeatureBundle& bundle, int last_k) {
  return aggregate_attention(bundle.attention, bundle.token_rows, bundle.token_cols, bundle.image_rows,
                             bundle.image_cols, last_k);
}

double nearest_rank(std::span<const double> sorted, int percent) {
  if (sorted.empty()) throw ValidationError("percentile of an empty sequence");
  if (percent < 0 || percent > 100) throw ValidationError("percent must lie in [0, 100]");
  const std::size_t n = sorted.size();
  std::size_t rank = (static_cast<std::size_t>(percent) * n + 99) / 100;
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

ReferenceStats calibrate(std::span<const AttentionSummary> summaries) {
  if (summaries.size() < 2) {
    throw ValidationError("need >= 2 authentic samples for calibration, got " +
                          std::to_string(summaries.size()));
  }
  Vector<double> means(static_cast<Index>(summaries.size()));
  for (std::size_t i = 0; i < summaries.size(); ++i) means(static_cast<Index>(i)) = summaries[i].mu;
  const AttentionSummary moments = summarise(means);

  ReferenceStats ref;
  ref.mu_ref = moments.mu;
  ref.sigma_ref = moments.sigma;
  ref.n_samples = summaries.size();
  // Attention maps live on a 1/T scale, so the floor is taken relative to
  // the reference mean. A constant calibration set fails for any scale.
  if (!(ref.sigma_ref > kSigmaRefFloor * std::abs(ref.mu_ref))) {
    throw DataError("degenerate calibration set: sigma_ref " + format_number(ref.sigma_ref) +
                    " not above 1e-6 * |mu_ref|");
  }

  std::vector<double> raw;
  raw.reserve(summaries.size());
  for (const auto& s : summaries) raw.push_back(std::abs(s.mu - ref.mu_ref) / ref.sigma_ref);
  std::sort(raw.begin(), raw.end());
  ref.raw_p01 = nearest_rank(raw, 1);
  ref.raw_p99 = nearest_rank(raw, 99);
  return ref;
}

GlobalScore score_global(const AttentionSummary& s, const ReferenceStats& ref) {
  GlobalScore g;
  g.raw = std::abs(s.mu - ref.mu_ref) / ref.sigma_ref;
  const double span = ref.raw_p99 - ref.raw_p01;
  if (span > 0.0) {
    g.normalised = std::clamp((g.raw - ref.raw_p01) / span, 0.0, 1.0);
  } else {
    g.normalised = g.raw <= ref.raw_p01 ? 0.0 : 1.0;
  }
  return g;
}

std::string dump_reference(const ReferenceStats& ref) {
  const nlohmann::json j = {{"mu_ref", ref.mu_ref},   {"sigma_ref", ref.sigma_ref},
                            {"raw_p01", ref.raw_p01}, {"raw_p99", ref.raw_p99},
                            {"n_samples", ref.n_samples}};
  return j.dump(2) + "\n";
}

ReferenceStats parse_reference(const std::string& json_text) {
  ReferenceStats ref;
  try {
    const auto j = nlohmann::json::parse(json_text);
    ref.mu_ref = j.at("mu_ref").get<double>();
    ref.sigma_ref = j.at("sigma_ref").get<double>();
    ref.raw_p01 = j.at("raw_p01").get<double>();
    ref.raw_p99 = j.at("raw_p99").get<double>();
    ref.n_samples = j.at("n_samples").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed reference stats: ") + e.what());
  }
  ref.validate();
  return ref;
}

void save_reference(const ReferenceStats& ref, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << dump_reference(ref);
}

ReferenceStats load_reference(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open reference stats " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_reference(buf.str());
}

}  // namespace vaas
