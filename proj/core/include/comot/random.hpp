// Copyright 2026 The comot Authors.
//
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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace comot {

/// Seeded generator with platform-independent distributions.
///
/// std::normal_distribution and friends are implementation-defined, so the
/// uniform and normal draws here are computed directly from the raw 64-bit
/// engine output. Identical seeds give identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Sub-stream keyed by a seed plus any number of integer labels, e.g.
  /// Rng::derive(seed, {kOracleStream, frame, set_index}).
  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> labels);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer; used to hash seed labels into engine seeds.
std::uint64_t mix64(std::uint64_t x);

// Stream tags for Rng::derive. Each consumer of randomness gets its own tag
// so that adding draws in one place never shifts another stream.
namespace stream {
inline constexpr std::uint64_t kScene = 0x5343454e45ULL;
inline constexpr std::uint64_t kQueryBank = 0x42414e4bULL;
inline constexpr std::uint64_t kOracleBox = 0x424f58ULL;
inline constexpr std::uint64_t kOracleCorrupt = 0x434f5252ULL;
inline constexpr std::uint64_t kOracleFalsePositive = 0x4650ULL;
inline constexpr std::uint64_t kAblationTrial = 0x5452494cULL;
}  // namespace stream

}  // namespace comot
