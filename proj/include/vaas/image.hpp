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

// RGB images in [0,1] stored as three row-major planes, plus PNG/PPM codecs.

#ifndef VAAS_IMAGE_HPP_
#define VAAS_IMAGE_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "vaas/core.hpp"

namespace vaas {

class Image {
 public:
  Image() = default;
  Image(Index rows, Index cols, float fill = 0.0f);
  // Throws ValidationError if plane sizes differ or a value lies outside [0,1].
  explicit Image(std::array<Matrix<float>, 3> planes);

  Index rows() const { return planes_[0].rows(); }
  Index cols() const { return planes_[0].cols(); }
  const Matrix<float>& channel(int c) const { return planes_.at(static_cast<std::size_t>(c)); }
  Matrix<float>& channel(int c) { return planes_.at(static_cast<std::size_t>(c)); }

  // Per-pixel channel mean.
  Matrix<float> grayscale() const;

 private:
  std::array<Matrix<float>, 3> planes_;
};

// Interleaved 8-bit RGB raster, the form written to disk.
struct Rgb8 {
  Index rows = 0;
  Index cols = 0;
  std::vector<std::uint8_t> pixels;  // rows * cols * 3

  Rgb8() = default;
  Rgb8(Index r, Index c, std::uint8_t fill = 0)
      : rows(r), cols(c), pixels(static_cast<std::size_t>(r * c * 3), fill) {}
  std::uint8_t* at(Index r, Index c) { return &pixels[static_cast<std::size_t>((r * cols + c) * 3)]; }
  const std::uint8_t* at(Index r, Index c) const {
    return &pixels[static_cast<std::size_t>((r * cols + c) * 3)];
  }
};

Rgb8 to_rgb8(const Image& img);
Image from_rgb8(const Rgb8& raster);

// Decodes 8-bit PNG (any colour type, converted to RGB) or binary PPM (P6).
Rgb8 read_raster(const std::filesystem::path& path);
Image load_image(const std::filesystem::path& path);

// Deterministic encoder: no timestamps or text chunks.
void write_png(const Rgb8& raster, const std::filesystem::path& path);
void save_png(const Image& img, const std::filesystem::path& path);

// Masks are stored as grayscale-looking PNGs; a pixel is set when its first
// channel is >= 128.
Mask load_mask(const std::filesystem::path& path);
void save_mask(const Mask& mask, const std::filesystem::path& path);

Image resize_bilinear(const Image& img, Index rows, Index cols);

}  // namespace vaas

#endif  // VAAS_IMAGE_HPP_
