#include "lolab/rng.hpp"

namespace lolab {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fmix64(std::uint64_t x) noexcept {
  x ^= x >> 33U;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33U;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33U;
  return x;
}

Stream::Stream(std::uint64_t seed, std::string_view label) noexcept
    : key_(fmix64(fmix64(seed) ^ fnv1a(label))) {}

Stream Stream::child(std::string_view label) const noexcept {
  return Stream(fmix64(key_ ^ fmix64(fnv1a(label) + kGolden)), 0, 0);
}

Stream Stream::child(std::uint64_t index) const noexcept {
  return Stream(fmix64(key_ + fmix64(index ^ 0x5851f42d4c957f2dULL) * kGolden), 0, 0);
}

std::uint64_t Stream::next() noexcept {
  // SplitMix64 applied to (key, counter).
  std::uint64_t z = key_ + (++counter_) * kGolden;
  z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31U);
}

std::uint64_t Stream::below(std::uint64_t bound) noexcept {
  // Lemire's nearly divisionless method.
  using u128 = unsigned __int128;
  u128 m = static_cast<u128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64U);
}

double Stream::unit() noexcept { return static_cast<double>(next() >> 11U) * 0x1.0p-53; }

bool Stream::bernoulli(std::uint64_t num, std::uint64_t den) noexcept {
  if (num >= den) return true;
  if (num == 0) return false;
  return below(den) < num;
}

}  // namespace lolab
