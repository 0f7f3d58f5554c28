#pragma once

// Exact concentration probabilities and the Halasz bound chain.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lolab/zp_core.hpp"

namespace lolab {

/// Law of a random signed sum as integer counts over 2^log2_denominator.
/// counts[j] is the count of the atom first_atom + j (a residue for Z_p laws).
struct ExactDistribution {
  std::int64_t first_atom = 0;
  std::vector<BigInt> counts;
  unsigned log2_denominator = 0;

  BigInt total() const;
  /// Count of atom a, zero if a is out of range.
  BigInt count_of(std::int64_t a) const;
};

struct RhoResult {
  std::int64_t atom = 0;
  BigInt count;
  unsigned log2_denominator = 0;

  Rational value() const;
  double to_double() const;
};

/// Law of u.v over Z_p with u uniform on {-1,1}^n.
ExactDistribution distribution_zp(const ZpVector& v);
/// Law of the lazy walk: each step is 0 w.p. 1/2 and +-v_i w.p. 1/4 each.
ExactDistribution distribution_half_zp(const ZpVector& v);

/// Largest atom, ties broken towards the smallest atom.
RhoResult max_atom(const ExactDistribution& d);

RhoResult rho(const ZpVector& v);
RhoResult rho_half(const ZpVector& v);

/// Guard on sum |v_i| for the integer walk.
inline constexpr std::uint64_t kIntRangeLimit = 1'000'000;

/// Law of u.v over Z. Throws RangeTooLarge if sum |v_i| > kIntRangeLimit.
ExactDistribution distribution_int(std::span<const std::int64_t> v);
RhoResult rho_int(std::span<const std::int64_t> v);

/// a/2^s <= b/2^t, exactly.
bool rho_le(const RhoResult& a, const RhoResult& b);

/// (1/p) sum_k exp(-W(k)/p^2).
double halasz_first_bound(const ZpVector& v);
/// 1/p + (e/p) sum_{t=1}^{ceil(ell)} e^{-t} |T_t(v)| + e^{-ell}. Requires v != 0, ell >= 1.
double halasz_second_bound(const ZpVector& v, const Rational& ell);
/// 3/p + (2e/p) (|T_ell|/sqrt(ell)) sum_{t=1}^{ceil(ell)} sqrt(t) e^{-t} + e^{-ell}.
/// Same preconditions as halasz_bound.
double halasz_intermediate_bound(const ZpVector& v, const Rational& ell);
/// 3/p + 4 |T_ell(v)| / (p sqrt(ell)) + e^{-ell}. Requires v != 0 and 1 <= ell <= |v|/64.
double halasz_bound(const ZpVector& v, const Rational& ell);

/// Checks m.T_t(v) is a subset of T_{m^2 t}(v). Requires p <= 10^4.
bool sumset_level_check(const ZpVector& v, std::uint64_t m, const Rational& t);
/// Iterated sumset m.A over Z_p. Requires p <= 10^4.
ResidueSet sumset(const ResidueSet& a, std::uint64_t m, const PrimeModulus& p);
/// True iff m.A = Z_p or |m.A| >= m|A| - m + 1. Requires A nonempty.
bool cauchy_davenport_check(const ResidueSet& a, std::uint64_t m, const PrimeModulus& p);

}  // namespace lolab
