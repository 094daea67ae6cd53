// Copyright 2026 The faaspipe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAASPIPE_RNG_H_
#define FAASPIPE_RNG_H_

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace faaspipe {

// SplitMix64 finalizer (Steele, Lea & Flood). Used both to expand seeds and to
// hash substream keys.
constexpr std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Folds a key path into a 64-bit substream seed. Ports reproduce a stream by
// absorbing the same words in the same order.
constexpr std::uint64_t DeriveSeed(std::uint64_t root,
                                   std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = SplitMix64(root);
  for (std::uint64_t word : path) h = SplitMix64(h ^ SplitMix64(word));
  return h;
}

// Stream tags used as the first word of every substream key.
enum class StreamTag : std::uint64_t {
  kArrivals = 1,
  kPoolService = 2,
  kGatewayService = 3,
};

// xoshiro256** 1.0 (Blackman & Vigna), state filled from SplitMix64 of the
// seed. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  static Rng Substream(std::uint64_t seed, StreamTag tag,
                       std::uint64_t a = 0, std::uint64_t b = 0) {
    return Rng(DeriveSeed(seed, {static_cast<std::uint64_t>(tag), a, b}));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    const std::uint64_t result = Rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = Rotl(state_[3], 45);
    return result;
  }

  // Uniform on the open interval (0, 1): 52 random bits centred in their cell.
  double UniformOpen() {
    return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52;
  }

  // Exponential with the given mean; strictly positive.
  double Exponential(double mean) { return -std::log(UniformOpen()) * mean; }

 private:
  static constexpr std::uint64_t Rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace faaspipe

#endif  // FAASPIPE_RNG_H_
