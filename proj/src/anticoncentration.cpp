#include "lolab/anticoncentration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lolab/containers.hpp"
#include "lolab/errors.hpp"

namespace lolab {

BigInt ExactDistribution::total() const {
  BigInt s = 0;
  for (const auto& c : counts) s += c;
  return s;
}

BigInt ExactDistribution::count_of(std::int64_t a) const {
  if (a < first_atom) return 0;
  const auto j = static_cast<std::uint64_t>(a - first_atom);
  return j < counts.size() ? counts[j] : BigInt(0);
}

Rational RhoResult::value() const {
  Rational r(count, BigInt(1) << log2_denominator);
  r.canonicalize();
  return r;
}

double RhoResult::to_double() const {
  return std::ldexp(count.get_d(), -static_cast<int>(log2_denominator));
}

namespace {

unsigned checked_log2(std::size_t n, unsigned per_step) {
  if (n > (1U << 30U) / per_step) throw GuardExceeded("vector too long");
  return static_cast<unsigned>(n) * per_step;
}

}  // namespace

ExactDistribution distribution_zp(const ZpVector& v) {
  const PrimeModulus& p = v.modulus();
  require_scannable(p);
  const std::uint64_t q = p.value();
  std::vector<BigInt> cur(q, 0);
  std::vector<BigInt> nxt(q, 0);
  cur[0] = 1;
  unsigned zeros = 0;
  for (Residue r : v.entries()) {
    if (r == 0) {
      ++zeros;
      continue;
    }
    for (std::uint64_t x = 0; x < q; ++x) {
      const std::uint64_t lo = x >= r ? x - r : x + q - r;
      const std::uint64_t hi = x + r < q ? x + r : x + r - q;
      mpz_add(nxt[x].get_mpz_t(), cur[lo].get_mpz_t(), cur[hi].get_mpz_t());
    }
    cur.swap(nxt);
  }
  if (zeros != 0) {
    for (auto& c : cur) c <<= zeros;
  }
  return {0, std::move(cur), checked_log2(v.size(), 1)};
}

ExactDistribution distribution_half_zp(const ZpVector& v) {
  const PrimeModulus& p = v.modulus();
  require_scannable(p);
  const std::uint64_t q = p.value();
  std::vector<BigInt> cur(q, 0);
  std::vector<BigInt> nxt(q, 0);
  cur[0] = 1;
  unsigned zeros = 0;
  for (Residue r : v.entries()) {
    if (r == 0) {
      ++zeros;
      continue;
    }
    for (std::uint64_t x = 0; x < q; ++x) {
      const std::uint64_t lo = x >= r ? x - r : x + q - r;
      const std::uint64_t hi = x + r < q ? x + r : x + r - q;
      mpz_add(nxt[x].get_mpz_t(), cur[lo].get_mpz_t(), cur[hi].get_mpz_t());
      mpz_addmul_ui(nxt[x].get_mpz_t(), cur[x].get_mpz_t(), 2);
    }
    cur.swap(nxt);
  }
  if (zeros != 0) {
    for (auto& c : cur) c <<= 2 * zeros;
  }
  return {0, std::move(cur), checked_log2(v.size(), 2)};
}

RhoResult max_atom(const ExactDistribution& d) {
  RhoResult best{d.first_atom, 0, d.log2_denominator};
  for (std::size_t j = 0; j < d.counts.size(); ++j) {
    if (d.counts[j] > best.count) {
      best.count = d.counts[j];
      best.atom = d.first_atom + static_cast<std::int64_t>(j);
    }
  }
  return best;
}

RhoResult rho(const ZpVector& v) { return max_atom(distribution_zp(v)); }

RhoResult rho_half(const ZpVector& v) { return max_atom(distribution_half_zp(v)); }

ExactDistribution distribution_int(std::span<const std::int64_t> v) {
  std::uint64_t range = 0;
  for (auto x : v) {
    const std::uint64_t a = x < 0 ? 0 - static_cast<std::uint64_t>(x) : static_cast<std::uint64_t>(x);
    if (a > kIntRangeLimit || range + a > kIntRangeLimit) {
      throw RangeTooLarge("sum of |v_i| exceeds " + std::to_string(kIntRangeLimit));
    }
    range += a;
  }
  const std::size_t width = 2 * range + 1;
  std::vector<BigInt> cur(width, 0);
  std::vector<BigInt> nxt(width, 0);
  const auto mid = static_cast<std::int64_t>(range);
  cur[range] = 1;
  std::int64_t reach = 0;  // current support lies in [-reach, reach]
  unsigned zeros = 0;
  for (auto x : v) {
    const std::int64_t a = x < 0 ? -x : x;
    if (a == 0) {
      ++zeros;
      continue;
    }
    const std::int64_t new_reach = reach + a;
    for (std::int64_t s = -new_reach; s <= new_reach; ++s) {
      BigInt& out = nxt[static_cast<std::size_t>(s + mid)];
      out = 0;
      if (s - a >= -reach && s - a <= reach) out += cur[static_cast<std::size_t>(s - a + mid)];
      if (s + a >= -reach && s + a <= reach) out += cur[static_cast<std::size_t>(s + a + mid)];
    }
    for (std::int64_t s = -reach; s <= reach; ++s) cur[static_cast<std::size_t>(s + mid)] = 0;
    cur.swap(nxt);
    reach = new_reach;
  }
  if (zeros != 0) {
    for (auto& c : cur) c <<= zeros;
  }
  return {-mid, std::move(cur), checked_log2(v.size(), 1)};
}

RhoResult rho_int(std::span<const std::int64_t> v) { return max_atom(distribution_int(v)); }

bool rho_le(const RhoResult& a, const RhoResult& b) {
  // a.count / 2^s <= b.count / 2^t  <=>  a.count 2^t <= b.count 2^s
  return (a.count << b.log2_denominator) <= (b.count << a.log2_denominator);
}

namespace {

void require_nonzero(const ZpVector& v) {
  if (v.is_zero()) throw PreconditionViolated("the Halasz bounds need v != 0");
}

void require_ell_range(const ZpVector& v, const Rational& ell) {
  require_nonzero(v);
  if (ell < 1 || 64 * ell > Rational(static_cast<unsigned long>(v.support()))) {
    throw PreconditionViolated("ell must satisfy 1 <= ell <= |v|/64, got " + ell.get_str());
  }
}

std::uint64_t ceil_of(const Rational& x) {
  BigInt c;
  mpz_cdiv_q(c.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return c.get_ui();
}

}  // namespace

double halasz_first_bound(const ZpVector& v) {
  const auto w = frequency_weights(v);
  const double p = static_cast<double>(v.modulus().value());
  const double pp = p * p;
  double s = 0;
  for (u128 x : w) s += std::exp(-static_cast<double>(x) / pp);
  return s / p;
}

double halasz_second_bound(const ZpVector& v, const Rational& ell) {
  require_nonzero(v);
  if (ell < 1) throw PreconditionViolated("ell must be at least 1");
  const auto w = frequency_weights(v);
  const PrimeModulus& pm = v.modulus();
  const double p = static_cast<double>(pm.value());
  const std::uint64_t top = ceil_of(ell);
  double s = 0;
  for (std::uint64_t t = 1; t <= top; ++t) {
    s += std::exp(-static_cast<double>(t)) *
         static_cast<double>(level_set_size(w, Rational(static_cast<unsigned long>(t)), pm));
  }
  return 1.0 / p + std::exp(1.0) / p * s + std::exp(-ell.get_d());
}

double halasz_intermediate_bound(const ZpVector& v, const Rational& ell) {
  require_ell_range(v, ell);
  const auto w = frequency_weights(v);
  const PrimeModulus& pm = v.modulus();
  const double p = static_cast<double>(pm.value());
  const double l = ell.get_d();
  const std::uint64_t top = ceil_of(ell);
  double s = 0;
  for (std::uint64_t t = 1; t <= top; ++t) {
    s += std::sqrt(static_cast<double>(t)) * std::exp(-static_cast<double>(t));
  }
  const double size = static_cast<double>(level_set_size(w, ell, pm));
  return 3.0 / p + 2.0 * std::exp(1.0) / p * size / std::sqrt(l) * s + std::exp(-l);
}

double halasz_bound(const ZpVector& v, const Rational& ell) {
  require_ell_range(v, ell);
  const PrimeModulus& pm = v.modulus();
  const double p = static_cast<double>(pm.value());
  const double l = ell.get_d();
  const double size = static_cast<double>(level_set_size(frequency_weights(v), ell, pm));
  return 3.0 / p + 4.0 * size / (p * std::sqrt(l)) + std::exp(-l);
}

namespace {

constexpr std::uint64_t kSumsetLimit = 10'000;

}  // namespace

ResidueSet sumset(const ResidueSet& a, std::uint64_t m, const PrimeModulus& p) {
  if (p.value() > kSumsetLimit) throw GuardExceeded("sumsets need p <= 10^4");
  if (m == 0) throw PreconditionViolated("sumset multiplicity must be positive");
  if (a.empty()) return {};
  const std::uint64_t q = p.value();
  std::vector<char> cur(q, 0);
  for (Residue x : a) cur[x % q] = 1;
  for (std::uint64_t step = 1; step < m; ++step) {
    std::vector<char> nxt(q, 0);
    for (std::uint64_t x = 0; x < q; ++x) {
      if (cur[x] == 0) continue;
      for (Residue y : a) nxt[p.add(x, y % q)] = 1;
    }
    if (nxt == cur) break;  // m.A stabilised
    cur.swap(nxt);
  }
  ResidueSet out;
  for (std::uint64_t x = 0; x < q; ++x) {
    if (cur[x] != 0) out.push_back(x);
  }
  return out;
}

bool sumset_level_check(const ZpVector& v, std::uint64_t m, const Rational& t) {
  const PrimeModulus& p = v.modulus();
  if (p.value() > kSumsetLimit) throw GuardExceeded("sumsets need p <= 10^4");
  const auto w = frequency_weights(v);
  const ResidueSet base = level_set_from_weights(w, t, p);
  const ResidueSet big = level_set_from_weights(w, Rational(static_cast<unsigned long>(m * m)) * t, p);
  return is_subset(sumset(base, m, p), big);
}

bool cauchy_davenport_check(const ResidueSet& a, std::uint64_t m, const PrimeModulus& p) {
  if (a.empty()) throw PreconditionViolated("Cauchy-Davenport needs a nonempty set");
  const ResidueSet s = sumset(a, m, p);
  if (s.size() == p.value()) return true;
  return BigInt(static_cast<unsigned long>(s.size())) + BigInt(static_cast<unsigned long>(m)) >=
         BigInt(static_cast<unsigned long>(m)) * static_cast<unsigned long>(a.size()) + 1;
}

}  // namespace lolab
