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

#include "vaas/image.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include "vaas/resample.hpp"

namespace vaas {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

bool has_png_signature(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), 8);
  return in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

Rgb8 read_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw DataError("cannot open image " + path.string());
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("libpng initialisation failed");
  }
  Rgb8 out;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("corrupt PNG: " + path.string());
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);
  out.rows = static_cast<Index>(png_get_image_height(png, info));
  out.cols = static_cast<Index>(png_get_image_width(png, info));
  if (png_get_rowbytes(png, info) != static_cast<std::size_t>(out.cols * 3)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("unsupported PNG layout: " + path.string());
  }
  out.pixels.resize(static_cast<std::size_t>(out.rows * out.cols * 3));
  rows.resize(static_cast<std::size_t>(out.rows));
  for (Index r = 0; r < out.rows; ++r) rows[static_cast<std::size_t>(r)] = out.at(r, 0);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

// Skips whitespace and '#' comments between PPM header tokens.
long read_ppm_int(std::istream& in) {
  int ch = in.peek();
  while (ch != EOF && (std::isspace(ch) || ch == '#')) {
    if (ch == '#') {
      std::string line;
      std::getline(in, line);
    } else {
      in.get();
    }
    ch = in.peek();
  }
  long v = -1;
  in >> v;
  if (!in) throw DataError("malformed PPM header");
  return v;
}

Rgb8 read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open image " + path.string());
  char magic[2] = {};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '6') {
    throw DataError("unsupported image format (expected PNG or binary PPM): " + path.string());
  }
  const long cols = read_ppm_int(in);
  const long rows = read_ppm_int(in);
  const long maxval = read_ppm_int(in);
  if (cols < 1 || rows < 1 || cols > 65536 || rows > 65536 || maxval != 255) {
    throw DataError("unsupported PPM dimensions or depth: " + path.string());
  }
  in.get();  // single whitespace before raster
  Rgb8 out(rows, cols);
  in.read(reinterpret_cast<char*>(out.pixels.data()), static_cast<std::streamsize>(out.pixels.size()));
  if (static_cast<std::size_t>(in.gcount()) != out.pixels.size()) {
    throw DataError("truncated PPM raster: " + path.string());
  }
  return out;
}

}  // namespace

Image::Image(Index rows, Index cols, float fill) {
  for (auto& p : planes_) p = Matrix<float>::Constant(rows, cols, fill);
}

Image::Image(std::array<Matrix<float>, 3> planes) : planes_(std::move(planes)) {
  for (const auto& p : planes_) {
    if (p.rows() != planes_[0].rows() || p.cols() != planes_[0].cols()) {
      throw ValidationError("image planes differ in size");
    }
    if (p.size() > 0 && (p.minCoeff() < 0.0f || p.maxCoeff() > 1.0f)) {
      throw ValidationError("image values must lie in [0,1]");
    }
  }
}

Matrix<float> Image::grayscale() const {
  return (planes_[0] + planes_[1] + planes_[2]) / 3.0f;
}

Rgb8 to_rgb8(const Image& img) {
  Rgb8 out(img.rows(), img.cols());
  for (Index r = 0; r < img.rows(); ++r) {
    for (Index c = 0; c < img.cols(); ++c) {
      std::uint8_t* px = out.at(r, c);
      for (int k = 0; k < 3; ++k) {
        const float v = std::clamp(img.channel(k)(r, c), 0.0f, 1.0f);
        px[k] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
      }
    }
  }
  return out;
}

Image from_rgb8(const Rgb8& raster) {
  std::array<Matrix<float>, 3> planes;
  for (auto& p : planes) p.resize(raster.rows, raster.cols);
  for (Index r = 0; r < raster.rows; ++r) {
    for (Index c = 0; c < raster.cols; ++c) {
      const std::uint8_t* px = raster.at(r, c);
      for (int k = 0; k < 3; ++k) planes[static_cast<std::size_t>(k)](r, c) = px[k] / 255.0f;
    }
  }
  return Image(std::move(planes));
}

Rgb8 read_raster(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DataError("image not found: " + path.string());
  return has_png_signature(path) ? read_png(path) : read_ppm(path);
}

Image load_image(const std::filesystem::path& path) { return from_rgb8(read_raster(path)); }

void write_png(const Rgb8& raster, const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw DataError("cannot open " + path.string() + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_write_struct(&png, &info);
    throw DataError("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw DataError("failed writing PNG " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(raster.cols), static_cast<png_uint_32>(raster.rows),
               8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (Index r = 0; r < raster.rows; ++r) {
    png_write_row(png, const_cast<png_bytep>(raster.at(r, 0)));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void save_png(const Image& img, const std::filesystem::path& path) { write_png(to_rgb8(img), path); }

Mask load_mask(const std::filesystem::path& path) {
  const Rgb8 raster = read_raster(path);
  Mask m(raster.rows, raster.cols);
  for (Index r = 0; r < raster.rows; ++r) {
    for (Index c = 0; c < raster.cols; ++c) m(r, c) = raster.at(r, c)[0] >= 128 ? 1 : 0;
  }
  return m;
}

void save_mask(const Mask& mask, const std::filesystem::path& path) {
  Rgb8 raster(mask.rows(), mask.cols());
  for (Index r = 0; r < mask.rows(); ++r) {
    for (Index c = 0; c < mask.cols(); ++c) {
      std::uint8_t* px = raster.at(r, c);
      px[0] = px[1] = px[2] = mask(r, c) != 0 ? 255 : 0;
    }
  }
  write_png(raster, path);
}

Image resize_bilinear(const Image& img, Index rows, Index cols) {
  if (img.rows() == rows && img.cols() == cols) return img;
  std::array<Matrix<float>, 3> planes;
  for (int k = 0; k < 3; ++k) {
    planes[static_cast<std::size_t>(k)] =
        resize_bilinear(img.channel(k), rows, cols).cwiseMax(0.0f).cwiseMin(1.0f);
  }
  return Image(std::move(planes));
}

}  // namespace vaas
