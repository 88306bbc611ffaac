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

#include "vaas/render.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>

namespace vaas {
namespace {

constexpr Index kGap = 4;
constexpr Index kCaption = 14;

struct Glyph {
  char ch;
  std::array<std::uint8_t, 7> rows;  // bit 4 is the leftmost column
};

constexpr Glyph kFont[] = {
    {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}}, {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}}, {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
    {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}}, {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
    {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}}, {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}}, {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
    {'A', {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}}, {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
    {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}}, {'D', {0x1C, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1C}},
    {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}}, {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
    {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}}, {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}}, {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}},
    {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}}, {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
    {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}}, {'N', {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11}},
    {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}, {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
    {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}}, {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
    {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}}, {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}, {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
    {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}}, {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
    {'Y', {0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04}}, {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}}, {'=', {0x00, 0x00, 0x1F, 0x00, 0x1F, 0x00, 0x00}},
    {'_', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1F}}, {'/', {0x00, 0x01, 0x02, 0x04, 0x08, 0x10, 0x00}},
    {':', {0x00, 0x0C, 0x0C, 0x00, 0x0C, 0x0C, 0x00}}, {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
};

const Glyph* find_glyph(char ch) {
  const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (const auto& g : kFont) {
    if (g.ch == up) return &g;
  }
  return nullptr;
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

void put(Rgb8& canvas, Index r, Index c, const std::array<double, 3>& rgb) {
  std::uint8_t* px = canvas.at(r, c);
  for (int k = 0; k < 3; ++k) px[k] = to_byte(rgb[static_cast<std::size_t>(k)]);
}

std::array<double, 3> pixel(const Image& img, Index r, Index c) {
  return {img.channel(0)(r, c), img.channel(1)(r, c), img.channel(2)(r, c)};
}

std::array<double, 3> blend(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {0.5 * a[0] + 0.5 * b[0], 0.5 * a[1] + 0.5 * b[1], 0.5 * a[2] + 0.5 * b[2]};
}

Index panel_col(int panel, Index width) { return kGap + panel * (width + kGap); }

void caption(Rgb8& canvas, int panel, Index width, std::string_view text) {
  draw_text(canvas, kGap, panel_col(panel, width) + 2, text, 1, {0, 0, 0});
}

}  // namespace

std::array<double, 3> heat_ramp(double v) {
  struct Stop {
    double at;
    std::array<double, 3> rgb;
  };
  static constexpr Stop kStops[] = {{0.0, {0.0, 0.0, 0.0}},
                                    {0.35, {0.7, 0.0, 0.0}},
                                    {0.65, {1.0, 0.55, 0.0}},
                                    {0.85, {1.0, 0.9, 0.2}},
                                    {1.0, {1.0, 1.0, 1.0}}};
  v = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
  for (std::size_t i = 1; i < std::size(kStops); ++i) {
    if (v <= kStops[i].at) {
      const double t = (v - kStops[i - 1].at) / (kStops[i].at - kStops[i - 1].at);
      std::array<double, 3> out{};
      for (std::size_t k = 0; k < 3; ++k) {
        out[k] = kStops[i - 1].rgb[k] + t * (kStops[i].rgb[k] - kStops[i - 1].rgb[k]);
      }
      return out;
    }
  }
  return kStops[std::size(kStops) - 1].rgb;
}

void draw_text(Rgb8& canvas, Index row, Index col, std::string_view text, int scale,
               std::array<std::uint8_t, 3> colour) {
  Index x = col;
  for (char ch : text) {
    if (const Glyph* g = find_glyph(ch)) {
      for (Index gr = 0; gr < 7; ++gr) {
        for (Index gc = 0; gc < 5; ++gc) {
          if (((g->rows[static_cast<std::size_t>(gr)] >> (4 - gc)) & 1) == 0) continue;
          for (Index dy = 0; dy < scale; ++dy) {
            for (Index dx = 0; dx < scale; ++dx) {
              const Index r = row + gr * scale + dy;
              const Index c = x + gc * scale + dx;
              if (r < 0 || r >= canvas.rows || c < 0 || c >= canvas.cols) continue;
              std::uint8_t* px = canvas.at(r, c);
              px[0] = colour[0];
              px[1] = colour[1];
              px[2] = colour[2];
            }
          }
        }
      }
    }
    x += 6 * scale;
  }
}

Rgb8 render_composite(const Image& image, const Mask* truth, const SampleAnalysis& a) {
  const Index h = image.rows();
  const Index w = image.cols();
  if (a.local.map.rows() != h || a.local.map.cols() != w || a.attention.values.rows() != h ||
      a.attention.values.cols() != w) {
    throw ValidationError("render: analysis maps do not match the image size");
  }
  if (truth != nullptr && (truth->rows() != h || truth->cols() != w)) {
    throw ValidationError("render: mask does not match the image size");
  }

  Rgb8 canvas(kGap + kCaption + h + kGap, 6 * w + 7 * kGap, 255);
  const Index top = kGap + kCaption;

  const double att_min = a.attention.values.minCoeff();
  const double att_span = a.attention.values.maxCoeff() - att_min;

  for (Index r = 0; r < h; ++r) {
    for (Index c = 0; c < w; ++c) {
      const auto rgb = pixel(image, r, c);
      put(canvas, top + r, panel_col(0, w) + c, rgb);

      const double gt = truth != nullptr ? (*truth)(r, c) : 0.5;
      put(canvas, top + r, panel_col(1, w) + c, {gt, gt, gt});

      const double bin = a.local.mask(r, c);
      put(canvas, top + r, panel_col(2, w) + c, {bin, bin, bin});

      put(canvas, top + r, panel_col(3, w) + c, blend(rgb, heat_ramp(a.local.map(r, c))));

      const double att = att_span > 0.0 ? (a.attention.values(r, c) - att_min) / att_span : 0.0;
      put(canvas, top + r, panel_col(4, w) + c, blend(rgb, heat_ramp(att)));

      put(canvas, top + r, panel_col(5, w) + c, heat_ramp(a.record.s_h));
    }
  }

  caption(canvas, 0, w, "INPUT");
  caption(canvas, 1, w, "MASK");
  caption(canvas, 2, w, "PX BINARY");
  caption(canvas, 3, w, "PX HEATMAP");
  caption(canvas, 4, w, "FX OVERLAY");
  caption(canvas, 5, w, "HYBRID");
  if (truth == nullptr) draw_text(canvas, top + h / 2 - 10, panel_col(1, w) + w / 2 - 26, "N/A", 3, {0, 0, 0});

  const auto fill = heat_ramp(a.record.s_h);
  const double luma = 0.2126 * fill[0] + 0.7152 * fill[1] + 0.0722 * fill[2];
  const std::array<std::uint8_t, 3> ink = luma > 0.5 ? std::array<std::uint8_t, 3>{0, 0, 0}
                                                     : std::array<std::uint8_t, 3>{255, 255, 255};
  char value[32];
  std::snprintf(value, sizeof(value), "%.3f", a.record.s_h);
  const Index col = panel_col(5, w) + 8;
  draw_text(canvas, top + 8, col, "S_H", 3, ink);
  draw_text(canvas, top + h / 2 - 14, col, value, 4, ink);
  std::string mode(to_string(a.record.config.mode));
  if (a.record.config.mode == FusionMode::kWeighted) {
    char alpha[32];
    std::snprintf(alpha, sizeof(alpha), " A=%.2f", a.record.config.alpha);
    mode += alpha;
  }
  draw_text(canvas, top + h - 16, col, mode, 1, ink);
  return canvas;
}

}  // namespace vaas
