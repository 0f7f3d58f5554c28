#pragma once

// Counter-based splittable random streams.
//
// A stream is a 64-bit key plus a counter. Output i of a stream is a pure
// function of (key, i), and children are derived from the parent key and a
// label, so results never depend on the order in which substreams are used.

#include <cstdint>
#include <string_view>

namespace lolab {

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view s) noexcept;
/// MurmurHash3 finalizer.
std::uint64_t fmix64(std::uint64_t x) noexcept;

class Stream {
 public:
  explicit Stream(std::uint64_t seed, std::string_view label = "root") noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

  /// Independent child keyed by a label or an index. Does not advance *this.
  Stream child(std::string_view label) const noexcept;
  Stream child(std::uint64_t index) const noexcept;

  std::uint64_t next() noexcept;
  /// Uniform on [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;
  /// Uniform double in [0, 1) with 53 random bits.
  double unit() noexcept;
  /// True with probability num / den exactly (num <= den, den > 0).
  bool bernoulli(std::uint64_t num, std::uint64_t den) noexcept;
  /// -1 or +1 with equal probability.
  int sign() noexcept { return (next() >> 63U) != 0 ? 1 : -1; }

 private:
  Stream(std::uint64_t key, std::uint64_t counter, int) noexcept : key_(key), counter_(counter) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace lolab
