#include "lolab/zp_core.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "lolab/errors.hpp"

namespace lolab {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) noexcept {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1U) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1U;
  }
  return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t x) noexcept {
  if (x < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (x % q == 0) return x == q;
  }
  std::uint64_t d = x - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  // These twelve bases are a deterministic witness set below 3.3e24.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t y = powmod(a, d, x);
    if (y == 1 || y == x - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      y = mulmod(y, y, x);
      if (y == x - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeModulus::PrimeModulus(std::uint64_t p) : p_(p), log_p_(std::log(static_cast<double>(p))) {
  if (p <= 3 || !is_prime_u64(p)) {
    throw PreconditionViolated("modulus must be a prime greater than 3, got " + std::to_string(p));
  }
}

Rational PrimeModulus::log_rational() const {
  Rational r(log_p_);  // exact conversion of the frozen double
  r.canonicalize();
  return r;
}

Residue PrimeModulus::reduce(std::int64_t x) const noexcept {
  __int128 r = static_cast<__int128>(x) % static_cast<__int128>(p_);
  if (r < 0) r += p_;
  return static_cast<Residue>(r);
}

Residue PrimeModulus::add(Residue a, Residue b) const noexcept {
  const u128 s = static_cast<u128>(a) + b;
  return static_cast<Residue>(s >= p_ ? s - p_ : s);
}

Residue PrimeModulus::mul(Residue a, Residue b) const noexcept { return mulmod(a, b, p_); }

Residue PrimeModulus::pow(Residue a, std::uint64_t e) const noexcept { return powmod(a, e, p_); }

Residue PrimeModulus::inv(Residue a) const {
  if (a % p_ == 0) throw PreconditionViolated("zero has no inverse");
  return powmod(a, p_ - 2, p_);
}

std::int64_t PrimeModulus::centered(Residue r) const noexcept {
  return r <= half() ? static_cast<std::int64_t>(r) : -static_cast<std::int64_t>(p_ - r);
}

BigInt PrimeModulus::square() const {
  BigInt q(static_cast<unsigned long>(p_));
  return q * q;
}

Residue canonical_product(Residue k, Residue x, const PrimeModulus& p) noexcept {
  return p.mul(k, x);
}

u128 term_weight(Residue r, const PrimeModulus& p) noexcept {
  const std::uint64_t d = std::min<std::uint64_t>(r, p.value() - r);
  return static_cast<u128>(d) * d;
}

PrimeModulus next_prime(std::uint64_t x) {
  if (x <= 3) throw PreconditionViolated("next_prime requires x > 3");
  for (std::uint64_t c = x;; ++c) {
    if (is_prime_u64(c)) return PrimeModulus(c);
    if (c == std::numeric_limits<std::uint64_t>::max()) {
      throw std::overflow_error("no 64-bit prime at or above " + std::to_string(x));
    }
  }
}

BigInt to_big(u128 x) {
  BigInt hi(static_cast<unsigned long>(static_cast<std::uint64_t>(x >> 64U)));
  BigInt lo(static_cast<unsigned long>(static_cast<std::uint64_t>(x)));
  return (hi << 64) + lo;
}

std::string to_string(u128 x) { return to_big(x).get_str(); }

bool WeightValue::at_most(const Rational& t, const PrimeModulus& p) const {
  return to_big(numerator) * t.get_den() <= t.get_num() * p.square();
}

u128 weight_ceiling(const Rational& t, const PrimeModulus& p) {
  if (sgn(t) < 0) throw PreconditionViolated("level thresholds must be nonnegative");
  BigInt bound = t.get_num() * p.square();
  mpz_fdiv_q(bound.get_mpz_t(), bound.get_mpz_t(), t.get_den().get_mpz_t());
  if (mpz_sizeinbase(bound.get_mpz_t(), 2) > 128) return ~static_cast<u128>(0);
  BigInt hi = bound >> 64;
  BigInt lo = bound - (hi << 64);
  return (static_cast<u128>(hi.get_ui()) << 64U) | static_cast<u128>(lo.get_ui());
}

ZpVector::ZpVector(PrimeModulus p, std::vector<Residue> entries) : p_(p), entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] >= p_.value()) {
      throw RangeError("entry " + std::to_string(i) + " = " + std::to_string(entries_[i]) +
                       " is not a residue mod " + std::to_string(p_.value()));
    }
    if (entries_[i] != 0) ++support_;
  }
}

ZpVector ZpVector::zeros(PrimeModulus p, std::size_t n) { return ZpVector(p, std::vector<Residue>(n, 0)); }

ZpVector ZpVector::from_signed(PrimeModulus p, std::span<const std::int64_t> values) {
  std::vector<Residue> e;
  e.reserve(values.size());
  for (auto x : values) e.push_back(p.reduce(x));
  return ZpVector(p, std::move(e));
}

ZpVector ZpVector::restrict(std::span<const std::size_t> indices) const {
  std::vector<Residue> e;
  e.reserve(indices.size());
  for (auto i : indices) e.push_back(entries_.at(i));
  return ZpVector(p_, std::move(e));
}

ZpVector ZpVector::concat(const ZpVector& w) const {
  if (!(w.p_ == p_)) throw PreconditionViolated("concat needs a common modulus");
  std::vector<Residue> e(entries_);
  e.insert(e.end(), w.entries_.begin(), w.entries_.end());
  return ZpVector(p_, std::move(e));
}

IndexSet full_index_set(std::size_t n) {
  IndexSet s(n);
  std::iota(s.begin(), s.end(), std::size_t{0});
  return s;
}

}  // namespace lolab
