// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include "signforge/rng.hpp"

#include <limits>
#include <stdexcept>

namespace signforge {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span = std::uint64_t(hi) - std::uint64_t(lo);
  if (span == std::numeric_limits<std::uint64_t>::max()) return std::int64_t(engine_());
  const std::uint64_t n = span + 1;
  // Rejection keeps every value equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = 0;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + std::int64_t(x % n);
}

Rng derive_sample_rng(std::uint64_t master_seed, std::uint64_t sample_index) {
  const std::uint64_t a = splitmix64(master_seed);
  const std::uint64_t b = splitmix64(sample_index ^ 0xd1b54a32d192ed03ULL);
  return Rng(splitmix64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2))));
}

}  // namespace signforge
