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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "test_support.hpp"
#include "vaas/splitmix64.hpp"

namespace vaas {
namespace {

std::string encode(const Tensor& t) {
  std::stringstream s;
  write_tensor(t, s);
  return s.str();
}

Tensor decode(const std::string& bytes) {
  std::stringstream s(bytes);
  return read_tensor(s);
}

template <typename Fn>
std::string error_of(Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

TEST(Vast, SingleZeroIsTwentyBytes) {
  const std::string bytes = encode(Tensor({1}, {0.0f}));
  ASSERT_EQ(bytes.size(), 20u);
  const unsigned char expected[20] = {'V', 'A', 'S', 'T', 0x01, 0x01, 0x01, 0x00, 1, 0, 0, 0, 0, 0, 0, 0,
                                      0,   0,   0,   0};
  EXPECT_EQ(std::memcmp(bytes.data(), expected, 20), 0);
}

TEST(Vast, HeaderLayoutIsLittleEndian) {
  const std::string bytes = encode(Tensor({2, 258}, std::vector<float>(516, 1.0f)));
  ASSERT_EQ(bytes.size(), 8u + 16u + 4u * 516u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[6]), 2);      // ndim
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 2);      // dim 0, low byte
  EXPECT_EQ(static_cast<unsigned char>(bytes[16]), 2);     // dim 1 = 0x0102
  EXPECT_EQ(static_cast<unsigned char>(bytes[17]), 1);
  // 1.0f = 0x3F800000
  EXPECT_EQ(static_cast<unsigned char>(bytes[24]), 0x00);
  EXPECT_EQ(static_cast<unsigned char>(bytes[27]), 0x3F);
}

TEST(Vast, ZerosRoundTrip) {
  const Tensor t({2, 3}, std::vector<float>(6, 0.0f));
  EXPECT_EQ(decode(encode(t)), t);
}

TEST(Vast, SmallVectorRoundTrip) {
  const Tensor t({4}, {1, 2, 3, 4});
  const Tensor back = decode(encode(t));
  EXPECT_EQ(back, t);
  EXPECT_EQ(back.shape(), (std::vector<std::uint64_t>{4}));
}

TEST(Vast, NonFiniteRejectedOnWrite) {
  const Tensor t({2}, {1.0f, std::numeric_limits<float>::quiet_NaN()});
  std::stringstream s;
  EXPECT_EQ(error_of([&] { write_tensor(t, s); }), "non-finite element");
  const Tensor inf({1}, {std::numeric_limits<float>::infinity()});
  EXPECT_THROW(write_tensor(inf, s), DataError);
}

TEST(Vast, NonFiniteRejectedOnRead) {
  std::string bytes = encode(Tensor({2}, {1.0f, 2.0f}));
  const float nan = std::numeric_limits<float>::quiet_NaN();
  std::memcpy(&bytes[bytes.size() - 4], &nan, 4);
  EXPECT_NE(error_of([&] { decode(bytes); }).find("non-finite element"), std::string::npos);
}

TEST(Vast, FlippedFirstByteIsBadMagic) {
  std::string bytes = encode(Tensor({4}, {1, 2, 3, 4}));
  bytes[0] = static_cast<char>(bytes[0] ^ 0xFF);
  EXPECT_NE(error_of([&] { decode(bytes); }).find("not a VAST tensor"), std::string::npos);
}

TEST(Vast, ShortPayloadIsLengthMismatch) {
  std::string bytes = encode(Tensor({2, 2}, {1, 2, 3, 4}));
  bytes.resize(bytes.size() - 4);  // declared [2,2], three floats present
  EXPECT_NE(error_of([&] { decode(bytes); }).find("length mismatch"), std::string::npos);
}

TEST(Vast, TruncatedHeaderRejected) {
  const std::string bytes = encode(Tensor({2, 2}, {1, 2, 3, 4}));
  for (std::size_t n = 0; n < 24; ++n) {
    EXPECT_THROW(decode(bytes.substr(0, n)), DataError) << "prefix " << n;
  }
}

TEST(Vast, TrailingBytesRejected) {
  EXPECT_THROW(decode(encode(Tensor({1}, {1})) + "x"), DataError);
}

TEST(Vast, UnknownVersionOrDtypeRejected) {
  std::string v = encode(Tensor({1}, {1}));
  v[4] = 0x02;
  EXPECT_THROW(decode(v), DataError);
  std::string d = encode(Tensor({1}, {1}));
  d[5] = 0x07;
  EXPECT_THROW(decode(d), DataError);
}

TEST(Vast, RankLimits) {
  EXPECT_THROW(Tensor(std::vector<std::uint64_t>(9, 1), {1.0f}), ValidationError);
  EXPECT_THROW(Tensor({}, {}), ValidationError);
  EXPECT_THROW(Tensor({2, 0}, {}), ValidationError);
  EXPECT_THROW(Tensor({2, 2}, {1, 2, 3}), ValidationError);
  std::string bytes = encode(Tensor(std::vector<std::uint64_t>(8, 1), {5.0f}));
  EXPECT_EQ(decode(bytes).ndim(), 8u);
  bytes[6] = 9;
  EXPECT_THROW(decode(bytes), DataError);
}

// Round trip and byte-length formula over random shapes and payloads,
// including signed zeros, subnormals and the extremes of the f32 range.
TEST(Vast, RandomShapesRoundTripBitExact) {
  SplitMix64 rng(99);
  const float specials[] = {-0.0f, std::numeric_limits<float>::denorm_min(), std::numeric_limits<float>::max(),
                            std::numeric_limits<float>::lowest(), std::numeric_limits<float>::min()};
  for (int k = 0; k < 300; ++k) {
    const std::size_t ndim = 1 + rng.below(8);
    std::vector<std::uint64_t> shape(ndim);
    std::uint64_t n = 1;
    for (auto& d : shape) {
      d = 1 + rng.below(ndim > 4 ? 2 : 9);
      n *= d;
    }
    std::vector<float> data(n);
    for (auto& x : data) x = static_cast<float>(rng.symmetric() * 1e3);
    data[rng.below(n)] = specials[k % 5];
    const Tensor t(shape, data);
    const std::string bytes = encode(t);
    EXPECT_EQ(bytes.size(), 8 + 8 * ndim + 4 * n);
    const Tensor back = decode(bytes);
    ASSERT_EQ(back, t);
    EXPECT_EQ(std::memcmp(back.data().data(), t.data().data(), 4 * n), 0);
  }
}

TEST(Vast, FileRoundTrip) {
  testing::ScratchDir dir("tensor");
  const Tensor t({3, 2}, {1, -2, 3.5f, 0, 1e-30f, 7});
  save_tensor(t, dir / "t.vast");
  EXPECT_EQ(load_tensor(dir / "t.vast"), t);
  EXPECT_THROW(load_tensor(dir / "missing.vast"), DataError);
}

TEST(Vast, MatrixViews) {
  Matrix<double> m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  const Tensor t = to_tensor(m);
  EXPECT_EQ(t.shape(), (std::vector<std::uint64_t>{2, 3}));
  EXPECT_EQ(t.data()[3], 4.0f);
  EXPECT_EQ(as_matrix(t)(1, 2), 6.0f);
  EXPECT_THROW(as_matrix(Tensor({6}, {1, 2, 3, 4, 5, 6})), ValidationError);
}

}  // namespace
}  // namespace vaas
