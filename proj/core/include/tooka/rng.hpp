// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace tooka {

// SplitMix64 finalizer.
constexpr uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr uint64_t hash_combine(uint64_t a, uint64_t b) {
  return mix64(a ^ (mix64(b) + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

// Stateless, counter-based randomness: every draw is a pure function of
// (key, stream, counter). Identical keys give identical draws regardless of
// thread count, call order, or interleaving.
class CounterRng {
 public:
  explicit constexpr CounterRng(uint64_t key) : key_(key) {}

  constexpr uint64_t bits(uint64_t stream, uint64_t counter) const {
    return hash_combine(hash_combine(key_, stream), counter);
  }

  // Uniform double in [0, 1).
  constexpr double uniform(uint64_t stream, uint64_t counter) const {
    return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), n > 0, via multiply-shift reduction.
  constexpr uint64_t bounded(uint64_t stream, uint64_t counter, uint64_t n) const {
    using u128 = unsigned __int128;
    return static_cast<uint64_t>((static_cast<u128>(bits(stream, counter)) * n) >> 64);
  }

  constexpr uint64_t key() const { return key_; }

 private:
  uint64_t key_;
};

}  // namespace tooka
