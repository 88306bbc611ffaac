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

// Six-panel forensic composite, left to right:
//   input | ground-truth mask | binary Px mask | Px heatmap overlay |
//   Fx attention overlay | hybrid score
// Heatmaps use heat_ramp (black -> red -> orange -> yellow -> white); every
// channel is non-decreasing in the input, so luminance is monotone.

#ifndef VAAS_RENDER_HPP_
#define VAAS_RENDER_HPP_

#include <array>
#include <string_view>

#include "vaas/image.hpp"
#include "vaas/pipeline.hpp"

namespace vaas {

// RGB in [0,1] for v in [0,1] (clamped outside).
std::array<double, 3> heat_ramp(double v);

// Draws 5x7 bitmap text (digits, A-Z, . = _ / : -) with its top-left
// corner at (row, col); lowercase renders as uppercase.
void draw_text(Rgb8& canvas, Index row, Index col, std::string_view text, int scale,
               std::array<std::uint8_t, 3> colour);

// `truth` may be null, in which case the mask panel shows "N/A".
Rgb8 render_composite(const Image& image, const Mask* truth, const SampleAnalysis& analysis);

}  // namespace vaas

#endif  // VAAS_RENDER_HPP_
