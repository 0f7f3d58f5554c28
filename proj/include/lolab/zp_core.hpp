#pragma once

// Modular arithmetic over a prime field Z_p, vectors over Z_p, and the
// integer form of the squared distance-to-nearest-integer weight.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace lolab {

using Residue = std::uint64_t;
using u128 = unsigned __int128;
using BigInt = mpz_class;
using Rational = mpq_class;

/// Sorted, duplicate-free list of coordinates in [0, n).
using IndexSet = std::vector<std::size_t>;
/// Sorted, duplicate-free list of canonical residues.
using ResidueSet = std::vector<Residue>;

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime_u64(std::uint64_t x) noexcept;

class PrimeModulus {
 public:
  /// Throws PreconditionViolated unless `p` is a prime greater than 3.
  explicit PrimeModulus(std::uint64_t p);

  std::uint64_t value() const noexcept { return p_; }
  /// floor(p / 2), the largest possible distance to zero.
  std::uint64_t half() const noexcept { return p_ / 2; }

  /// log p, evaluated once in double precision and frozen.
  double log_value() const noexcept { return log_p_; }
  /// The frozen double log p as an exact rational.
  Rational log_rational() const;

  Residue reduce(std::int64_t x) const noexcept;
  Residue neg(Residue r) const noexcept { return r == 0 ? 0 : p_ - r; }
  Residue add(Residue a, Residue b) const noexcept;
  Residue sub(Residue a, Residue b) const noexcept { return add(a, neg(b)); }
  Residue mul(Residue a, Residue b) const noexcept;
  Residue pow(Residue a, std::uint64_t e) const noexcept;
  /// Inverse of a nonzero residue (Fermat).
  Residue inv(Residue a) const;
  /// Signed representative in (-p/2, p/2].
  std::int64_t centered(Residue r) const noexcept;

  /// p^2 as an exact integer.
  BigInt square() const;

  friend bool operator==(const PrimeModulus& a, const PrimeModulus& b) noexcept {
    return a.p_ == b.p_;
  }

 private:
  std::uint64_t p_;
  double log_p_;
};

/// (k * x) mod p for canonical residues.
Residue canonical_product(Residue k, Residue x, const PrimeModulus& p) noexcept;

/// min(r, p - r)^2: the numerator of ||r/p||^2 over the implicit denominator p^2.
u128 term_weight(Residue r, const PrimeModulus& p) noexcept;

/// Smallest prime >= x. Requires 3 < x < 2^63.
PrimeModulus next_prime(std::uint64_t x);

/// Exact weight numerator N over the implicit denominator p^2.
struct WeightValue {
  u128 numerator = 0;

  /// N / p^2 <= t, decided as N * den(t) <= num(t) * p^2.
  bool at_most(const Rational& t, const PrimeModulus& p) const;
};

/// Largest integer N with N <= t * p^2 (t >= 0), saturated to the u128 range.
/// Membership tests against t reduce to a single integer comparison with it.
u128 weight_ceiling(const Rational& t, const PrimeModulus& p);

BigInt to_big(u128 x);
std::string to_string(u128 x);

class ZpVector {
 public:
  /// Throws RangeError if some entry is not in [0, p - 1].
  ZpVector(PrimeModulus p, std::vector<Residue> entries);

  static ZpVector zeros(PrimeModulus p, std::size_t n);
  /// Entries given as arbitrary integers, reduced mod p.
  static ZpVector from_signed(PrimeModulus p, std::span<const std::int64_t> values);

  const PrimeModulus& modulus() const noexcept { return p_; }
  std::span<const Residue> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  Residue operator[](std::size_t i) const { return entries_[i]; }

  /// |v|, the number of nonzero coordinates.
  std::size_t support() const noexcept { return support_; }
  bool is_zero() const noexcept { return support_ == 0; }

  /// v_Y: coordinates of `indices` in the order given.
  ZpVector restrict(std::span<const std::size_t> indices) const;
  /// v concatenated with w (same modulus).
  ZpVector concat(const ZpVector& w) const;

  friend bool operator==(const ZpVector& a, const ZpVector& b) noexcept {
    return a.p_ == b.p_ && a.entries_ == b.entries_;
  }

 private:
  PrimeModulus p_;
  std::vector<Residue> entries_;
  std::size_t support_ = 0;
};

// Sorted-set helpers shared by IndexSet and ResidueSet.
template <class Set>
bool contains(const Set& s, typename Set::value_type x);
template <class Set>
bool is_subset(const Set& a, const Set& b);
template <class Set>
Set set_minus(const Set& a, const Set& b);
template <class Set>
Set set_union(const Set& a, const Set& b);
template <class Set>
bool disjoint(const Set& a, const Set& b);

/// [0, n) as an IndexSet.
IndexSet full_index_set(std::size_t n);

}  // namespace lolab

#include "lolab/detail/sorted_sets.ipp"
