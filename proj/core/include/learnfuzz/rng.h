// Copyright 2026 The learnfuzz Authors
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

#ifndef LEARNFUZZ_RNG_H_
#define LEARNFUZZ_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace learnfuzz {

// Seeded random source. std::mt19937_64 has a fully specified output
// sequence; the bounded draws below are implemented here rather than via
// <random> distributions, whose algorithms differ between standard
// libraries, so that datasets are byte-identical across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform integer in the inclusive range [lo, hi].
  int64_t uniform_int(int64_t lo, int64_t hi);

  // Uniform index in [0, n). Requires n > 0.
  size_t index(size_t n) {
    return static_cast<size_t>(uniform_int(0, static_cast<int64_t>(n) - 1));
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Fisher-Yates with this generator's bounded draws.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

uint64_t splitmix64(uint64_t x);
uint64_t fnv1a64(std::string_view bytes, uint64_t basis = 0xcbf29ce484222325ULL);

// Child seed for a (tag, index) pair, e.g. (operator name, repetition).
// Implements seed XOR stable-hash(tag, index), finalized with splitmix64.
uint64_t derive_seed(uint64_t seed, std::string_view tag, uint64_t index = 0);

}  // namespace learnfuzz

#endif  // LEARNFUZZ_RNG_H_
