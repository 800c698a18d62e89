// Copyright 2026 The qnfl Authors
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
#include <vector>

namespace qnfl {

/// SplitMix64 avalanche step (Steele, Lea, Flood 2014).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// A seeded random stream. Identical (master_seed, stream_index) pairs
/// replay bit-identical sample sequences; distinct pairs give independent
/// streams via avalanche mixing of the pair into the engine seed.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_index = 0)
      : master_seed_(master_seed),
        stream_index_(stream_index),
        engine_(splitmix64(splitmix64(master_seed) ^ splitmix64(stream_index))) {}

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  std::mt19937_64& engine() { return engine_; }

  /// One standard normal draw.
  double gaussian() {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(engine_);
  }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

/// Folds hierarchical labels (trial indices, purpose tags) into one stream
/// index so every cell of an experiment grid owns a private stream,
/// independent of any execution schedule.
inline RngStream derive_stream(std::uint64_t master_seed,
                               std::initializer_list<std::uint64_t> labels) {
  std::uint64_t h = splitmix64(master_seed);
  for (std::uint64_t label : labels) {
    h = splitmix64(h ^ splitmix64(label));
  }
  return RngStream(master_seed, h);
}

inline RngStream derive_stream(std::uint64_t master_seed,
                               const std::vector<std::uint64_t>& labels) {
  std::uint64_t h = splitmix64(master_seed);
  for (std::uint64_t label : labels) {
    h = splitmix64(h ^ splitmix64(label));
  }
  return RngStream(master_seed, h);
}

}  // namespace qnfl
