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

// Dense f32 tensors and the VAST binary interchange format.
//
// VAST layout (all integers little-endian):
//
//   offset  size      field
//   0       4         magic "VAST"
//   4       1         format version (0x01)
//   5       1         dtype code (0x01 = f32)
//   6       1         ndim, 1..8
//   7       1         zero pad
//   8       8*ndim    dims as uint64, each >= 1
//   ...     4*numel   row-major f32 payload
//
// Total size is 8 + 8*ndim + 4*numel bytes. Non-finite payloads are rejected
// in both directions so downstream math never has to check for NaN.

#ifndef VAAS_TENSOR_HPP_
#define VAAS_TENSOR_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "vaas/core.hpp"

namespace vaas {

enum class DType : std::uint8_t { kF32 = 0x01 };

inline constexpr std::size_t kMaxTensorRank = 8;
inline constexpr std::uint8_t kVastVersion = 0x01;

class Tensor {
 public:
  Tensor() = default;
  // Throws ValidationError when the data length does not match the shape.
  Tensor(std::vector<std::uint64_t> shape, std::vector<float> data);

  DType dtype() const { return DType::kF32; }
  const std::vector<std::uint64_t>& shape() const { return shape_; }
  std::uint64_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t ndim() const { return shape_.size(); }
  std::size_t numel() const { return data_.size(); }
  const std::vector<float>& data() const { return data_; }
  std::vector<float>& data() { return data_; }

  // Shape equal and payload bit-identical.
  friend bool operator==(const Tensor& a, const Tensor& b);

 private:
  std::vector<std::uint64_t> shape_;
  std::vector<float> data_;
};

// Product of dims; throws ValidationError on an empty shape, zero dims or overflow.
std::uint64_t shape_numel(const std::vector<std::uint64_t>& shape);

// Returns the number of bytes written.
std::size_t write_tensor(const Tensor& t, std::ostream& out);
Tensor read_tensor(std::istream& in);

void save_tensor(const Tensor& t, const std::filesystem::path& path);
Tensor load_tensor(const std::filesystem::path& path);

// 2-D views. The tensor must have rank 2.
Eigen::Map<const Matrix<float>> as_matrix(const Tensor& t);

template <typename Derived>
Tensor to_tensor(const Eigen::MatrixBase<Derived>& m) {
  Matrix<float> rm = m.template cast<float>();
  std::vector<float> data(rm.data(), rm.data() + rm.size());
  return Tensor({static_cast<std::uint64_t>(rm.rows()), static_cast<std::uint64_t>(rm.cols())},
                std::move(data));
}

}  // namespace vaas

#endif  // VAAS_TENSOR_HPP_
