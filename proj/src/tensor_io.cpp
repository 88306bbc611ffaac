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

#include "vaas/tensor.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

namespace vaas {
namespace {

constexpr std::array<char, 4> kMagic = {'V', 'A', 'S', 'T'};

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b.data(), b.size());
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void check_finite(const std::vector<float>& data) {
  for (float x : data) {
    if (!std::isfinite(x)) throw DataError("non-finite element");
  }
}

}  // namespace

std::uint64_t shape_numel(const std::vector<std::uint64_t>& shape) {
  if (shape.empty()) throw ValidationError("tensor shape must have at least one dim");
  if (shape.size() > kMaxTensorRank) throw ValidationError("tensor ndim > 8");
  std::uint64_t n = 1;
  for (std::uint64_t d : shape) {
    if (d == 0) throw ValidationError("tensor dims must be >= 1");
    if (n > std::numeric_limits<std::uint64_t>::max() / 4 / d) {
      throw ValidationError("tensor size overflow");
    }
    n *= d;
  }
  return n;
}

Tensor::Tensor(std::vector<std::uint64_t> shape, std::vector<float> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_numel(shape_) != data_.size()) {
    throw ValidationError("tensor data length " + std::to_string(data_.size()) +
                          " does not match shape");
  }
}

bool operator==(const Tensor& a, const Tensor& b) {
  return a.shape_ == b.shape_ && a.data_.size() == b.data_.size() &&
         (a.data_.empty() ||
          std::memcmp(a.data_.data(), b.data_.data(), a.data_.size() * sizeof(float)) == 0);
}

std::size_t write_tensor(const Tensor& t, std::ostream& out) {
  if (t.ndim() > kMaxTensorRank) throw ValidationError("tensor ndim > 8");
  shape_numel(t.shape());
  check_finite(t.data());

  out.write(kMagic.data(), kMagic.size());
  const std::array<char, 4> head = {static_cast<char>(kVastVersion),
                                    static_cast<char>(DType::kF32),
                                    static_cast<char>(t.ndim()), 0};
  out.write(head.data(), head.size());
  for (std::uint64_t d : t.shape()) put_u64(out, d);

  std::vector<char> payload(t.numel() * 4);
  for (std::size_t i = 0; i < t.numel(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(t.data()[i]);
    for (int k = 0; k < 4; ++k) payload[4 * i + k] = static_cast<char>((bits >> (8 * k)) & 0xFF);
  }
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw DataError("failed writing tensor");
  return 8 + 8 * t.ndim() + payload.size();
}

Tensor read_tensor(std::istream& in) {
  std::array<unsigned char, 8> head{};
  in.read(reinterpret_cast<char*>(head.data()), head.size());
  const auto got = in.gcount();
  if (got < 4 || std::memcmp(head.data(), kMagic.data(), 4) != 0) {
    throw DataError("not a VAST tensor");
  }
  if (got < 8) throw DataError("length mismatch: truncated header");
  if (head[4] != kVastVersion) throw DataError("unsupported VAST version " + std::to_string(head[4]));
  if (head[5] != static_cast<unsigned char>(DType::kF32)) {
    throw DataError("unsupported dtype code " + std::to_string(head[5]));
  }
  const std::size_t ndim = head[6];
  if (ndim == 0 || ndim > kMaxTensorRank) throw DataError("invalid ndim " + std::to_string(ndim));
  if (head[7] != 0) throw DataError("non-zero header padding");

  std::vector<unsigned char> dims_raw(8 * ndim);
  in.read(reinterpret_cast<char*>(dims_raw.data()), static_cast<std::streamsize>(dims_raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != dims_raw.size()) {
    throw DataError("length mismatch: truncated shape");
  }
  std::vector<std::uint64_t> shape(ndim);
  for (std::size_t i = 0; i < ndim; ++i) shape[i] = get_u64(dims_raw.data() + 8 * i);

  std::uint64_t numel = 0;
  try {
    numel = shape_numel(shape);
  } catch (const ValidationError& e) {
    throw DataError(e.what());
  }

  std::vector<unsigned char> payload;
  // Read in chunks so a bogus huge shape fails on length rather than allocation.
  constexpr std::size_t kChunk = 1 << 20;
  const std::uint64_t want = numel * 4;
  while (payload.size() < want) {
    const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, want - payload.size()));
    const std::size_t old = payload.size();
    payload.resize(old + n);
    in.read(reinterpret_cast<char*>(payload.data() + old), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) {
      throw DataError("length mismatch: payload shorter than declared shape");
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataError("length mismatch: trailing bytes after payload");
  }

  std::vector<float> data(numel);
  for (std::size_t i = 0; i < numel; ++i) {
    std::uint32_t bits = 0;
    for (int k = 3; k >= 0; --k) bits = (bits << 8) | payload[4 * i + k];
    data[i] = std::bit_cast<float>(bits);
  }
  check_finite(data);
  return Tensor(std::move(shape), std::move(data));
}

void save_tensor(const Tensor& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  write_tensor(t, out);
}

Tensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open tensor file " + path.string());
  try {
    return read_tensor(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

Eigen::Map<const Matrix<float>> as_matrix(const Tensor& t) {
  if (t.ndim() != 2) throw ValidationError("expected a rank-2 tensor");
  return Eigen::Map<const Matrix<float>>(t.data().data(), static_cast<Index>(t.dim(0)),
                                         static_cast<Index>(t.dim(1)));
}

}  // namespace vaas
