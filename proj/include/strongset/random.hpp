/*
 * Copyright 2026 The strongset Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef STRONGSET_RANDOM_HPP_
#define STRONGSET_RANDOM_HPP_

#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <utility>
#include <vector>

namespace strongset {

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t x);

// Folds a seed and any number of stream identifiers into one key.
std::uint64_t DeriveKey(std::uint64_t seed,
                        std::initializer_list<std::uint64_t> streams);

// Counter-based generator: the i-th draw is Mix64(key + i * golden). Output is
// a pure function of (key, i), identical on every platform, and is part of
// the manifest compatibility surface. Do not change the constants.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}
  CounterRng(std::uint64_t seed, std::initializer_list<std::uint64_t> streams)
      : key_(DeriveKey(seed, streams)) {}

  std::uint64_t NextU64();

  // Uniform in [0, 1) with 53 random bits.
  double Uniform();

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t Below(std::uint64_t bound);

  bool Bernoulli(double p) { return Uniform() < p; }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

template <typename T>
void Shuffle(std::vector<T>& items, CounterRng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.Below(i));
    std::swap(items[i - 1], items[j]);
  }
}

// Stable 64-bit FNV-1a, used to turn string ids into stream identifiers.
std::uint64_t HashString(std::string_view text);

}  // namespace strongset

#endif  // STRONGSET_RANDOM_HPP_
