// Copyright 2026 The QGenX Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QGENX_RNG_HPP
#define QGENX_RNG_HPP

#include <cmath>
#include <cstdint>

namespace qgenx {

// Phase of an iteration that consumes randomness. Keyed streams make runs
// bit-reproducible and insensitive to the number of workers: adding a worker
// never shifts the draws of an existing one.
enum class RngPhase : uint64_t {
  kOracleFull = 0,
  kQuantFull = 1,
  kOracleHalf = 2,
  kQuantHalf = 3,
  kMisc = 4,
};

namespace detail {
inline uint64_t splitmix64(uint64_t& x) {
  uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace detail

// xoshiro256++ stream seeded from a (seed, worker, iteration, phase) key.
// Not stdlib distributions: their output is implementation-defined and the
// simulator promises bit-identical replays.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) { init(seed); }

  static RngStream keyed(uint64_t seed, uint64_t worker, uint64_t iteration,
                         RngPhase phase) {
    uint64_t x = seed;
    uint64_t h = detail::splitmix64(x);
    x ^= 0x517cc1b727220a95ULL * (worker + 1);
    h ^= detail::splitmix64(x);
    x ^= 0x2545f4914f6cdd1dULL * (iteration + 1);
    h ^= detail::splitmix64(x);
    x ^= 0x9e3779b97f4a7c15ULL * (static_cast<uint64_t>(phase) + 1);
    h ^= detail::splitmix64(x);
    return RngStream(h);
  }

  uint64_t next_u64() {
    const uint64_t result = detail::rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = detail::rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; two uniforms per variate.
  double next_gaussian() {
    const double u1 = 1.0 - next_double();  // (0, 1]
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  void init(uint64_t seed) {
    for (auto& s : s_) s = detail::splitmix64(seed);
  }
  uint64_t s_[4];
};

}  // namespace qgenx

#endif  // QGENX_RNG_HPP
