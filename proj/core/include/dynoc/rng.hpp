// Copyright 2026 The dynoc Authors. All Rights Reserved.
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
#include <string_view>

namespace dynoc {

/// Counter-based generator: output n is a SplitMix64 finalizer applied to
/// key + n·γ, so any (key, counter) pair can be replayed independently.
/// The key is derived from a seed and a text label; different labels give
/// independent substreams of the same seed.
///
/// All distributions are implemented here rather than taken from <random>,
/// whose distributions are implementation-defined.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::string_view label);

  /// Independent stream keyed by this stream's key and a further label.
  CounterRng substream(std::string_view label) const;

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);

  /// Standard normal via Box-Muller (cosine branch only).
  double normal();

  bool bernoulli(double p);

  /// Poisson draw; means above 30 are split into chunks of at most 30.
  std::uint64_t poisson(double mean);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  CounterRng(std::uint64_t key, std::uint64_t counter, int) : key_(key), counter_(counter) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);
std::uint64_t hash_label(std::string_view label);

}  // namespace dynoc
