// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace signforge {

std::uint64_t splitmix64(std::uint64_t x);

/// Seeded random stream. The engine is std::mt19937_64, whose output sequence
/// is fixed by the standard; the real/int mappings below are written out so
/// results do not depend on the standard library's distribution classes.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  std::uint64_t seed() const { return seed_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return double(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on [lo, hi); returns lo when the interval is empty.
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer on the closed range [lo, hi], unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p) { return uniform01() < p; }

  /// Independent child stream; advances this stream by one draw.
  Rng split() { return Rng(splitmix64(engine_() ^ 0x6a09e667f3bcc909ULL)); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Per-sample stream: a pure function of (master_seed, sample_index), so a
/// sample's content never depends on which worker produced it or when.
Rng derive_sample_rng(std::uint64_t master_seed, std::uint64_t sample_index);

}  // namespace signforge
