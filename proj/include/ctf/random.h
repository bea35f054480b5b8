// Copyright 2026 The ctfsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CTF_RANDOM_H_
#define CTF_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ctf {

// std::mt19937_64 output is fixed by the standard, but the library
// distributions are not; these helpers keep seeded runs identical across
// standard library implementations.
using Rng = std::mt19937_64;

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t salt) {
  return SplitMix64(SplitMix64(base) ^ (salt * 0xd1b54a32d192ed03ULL));
}

// Uniform in [0, 1).
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double UniformRange(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * UniformUnit(rng);
}

inline int UniformInt(Rng& rng, int n) {
  return static_cast<int>(UniformUnit(rng) * n);
}

inline double StandardNormal(Rng& rng) {
  double u1 = 1.0 - UniformUnit(rng);
  double u2 = UniformUnit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace ctf

#endif  // CTF_RANDOM_H_
