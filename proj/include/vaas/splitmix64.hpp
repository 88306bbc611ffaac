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

#ifndef VAAS_SPLITMIX64_HPP_
#define VAAS_SPLITMIX64_HPP_

#include <cstdint>
#include <limits>

namespace vaas {

// SplitMix64 generator. Every seeded quantity in the project (toy
// projections, synthetic datasets, property-test instances) is drawn from
// this stream so results are reproducible bit-for-bit across platforms.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 24 bits of resolution: (z >> 40) / 2^24.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 40) / 16777216.0;
  }

  // Uniform on [lo, hi).
  constexpr double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  // Uniform on [-1, 1): u * 2 - 1.
  constexpr double symmetric() noexcept { return uniform() * 2.0 - 1.0; }

  // Uniform integer in [0, n). Modulo bias is irrelevant for the small n used here.
  constexpr std::uint64_t below(std::uint64_t n) noexcept { return (*this)() % n; }

  constexpr std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace vaas

#endif  // VAAS_SPLITMIX64_HPP_
