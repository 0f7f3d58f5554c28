#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lolab/anticoncentration.hpp"
#include "lolab/containers.hpp"
#include "lolab/errors.hpp"
#include "lolab/rng.hpp"
#include "oracles.hpp"

using namespace lolab;

namespace {

std::vector<std::uint64_t> raw(const ZpVector& v) { return {v.entries().begin(), v.entries().end()}; }

ZpVector random_vector(Stream& rng, const PrimeModulus& p, std::size_t n) {
  std::vector<Residue> e(n);
  for (auto& x : e) x = rng.bernoulli(1, 4) ? 0 : rng.below(p.value());
  return ZpVector(p, std::move(e));
}

mpz_class big(std::uint64_t x) { return mpz_class(static_cast<unsigned long>(x)); }

Rational frac(const mpz_class& a, const mpz_class& b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("distribution of the empty sum", "[rho]") {
  const ExactDistribution d = distribution_zp(ZpVector::zeros(PrimeModulus(5), 0));
  REQUIRE(d.log2_denominator == 0);
  REQUIRE(d.count_of(0) == 1);
  REQUIRE(d.total() == 1);
}

TEST_CASE("distribution of (1,1) mod 5", "[rho]") {
  const ExactDistribution d = distribution_zp(ZpVector(PrimeModulus(5), {1, 1}));
  REQUIRE(d.log2_denominator == 2);
  REQUIRE(d.count_of(0) == 2);
  REQUIRE(d.count_of(2) == 1);
  REQUIRE(d.count_of(3) == 1);
  REQUIRE(d.count_of(1) == 0);
  REQUIRE(d.count_of(4) == 0);
}

TEST_CASE("distribution matches enumeration", "[rho]") {
  const PrimeModulus p7(7);
  const ZpVector v(p7, {1, 2, 3});
  const auto c = oracle::sign_counts(raw(v), 7);
  const ExactDistribution d = distribution_zp(v);
  for (std::int64_t a = 0; a < 7; ++a) REQUIRE(d.count_of(a) == big(c[a]));

  Stream rng(11);
  for (int i = 0; i < 200; ++i) {
    const PrimeModulus p(std::vector<std::uint64_t>{5, 7, 11, 13, 101}[rng.below(5)]);
    const ZpVector w = random_vector(rng, p, rng.below(11));
    const auto cw = oracle::sign_counts(raw(w), p.value());
    const ExactDistribution dw = distribution_zp(w);
    REQUIRE(dw.total() == (big(1) << w.size()));
    for (std::size_t a = 0; a < p.value(); ++a) REQUIRE(dw.counts[a] == big(cw[a]));
  }
}

TEST_CASE("rho examples", "[rho]") {
  const RhoResult zero = rho(ZpVector::zeros(PrimeModulus(7), 5));
  REQUIRE(zero.value() == 1);
  REQUIRE(zero.atom == 0);
  for (std::uint64_t q : {5, 7, 101}) {
    const RhoResult r = rho(ZpVector(PrimeModulus(q), {1, 1}));
    REQUIRE(r.value() == Rational(1, 2));
    REQUIRE(r.atom == 0);
  }
  const RhoResult four = rho(ZpVector(PrimeModulus(101), {1, 1, 1, 1}));
  const auto c = oracle::sign_counts({1, 1, 1, 1}, 101);
  REQUIRE(four.value() == frac(big(oracle::max_count(c)), 16));
  REQUIRE(four.value() == frac(6, 16));
  REQUIRE(four.atom == 0);
}

TEST_CASE("rho bounds and tie breaking", "[rho]") {
  Stream rng(3);
  for (int i = 0; i < 200; ++i) {
    const PrimeModulus p(std::vector<std::uint64_t>{5, 7, 13}[rng.below(3)]);
    const ZpVector v = random_vector(rng, p, 1 + rng.below(9));
    const RhoResult r = rho(v);
    REQUIRE(r.value() <= 1);
    REQUIRE(r.value() >= Rational(1, 1) / Rational(big(1) << v.size()));
    REQUIRE((r.value() == 1) == v.is_zero());
    const auto c = oracle::sign_counts(raw(v), p.value());
    const auto m = oracle::max_count(c);
    std::size_t first = 0;
    while (c[first] != m) ++first;
    REQUIRE(r.atom == static_cast<std::int64_t>(first));
  }
}

TEST_CASE("rho over the integers", "[rho]") {
  const std::vector<std::int64_t> one{1};
  REQUIRE(rho_int(one).value() == Rational(1, 2));
  const std::vector<std::int64_t> ones(10, 1);
  REQUIRE(rho_int(ones).value() == frac(252, 1024));
  REQUIRE(oracle::int_sign_counts(ones)[0] == 252);

  Stream rng(9);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + rng.below(12);
    std::vector<std::int64_t> v(n);
    for (auto& x : v) {
      x = static_cast<std::int64_t>(1 + rng.below(20));
      if (rng.bernoulli(1, 2)) x = -x;
    }
    const auto c = oracle::int_sign_counts(v);
    std::uint64_t m = 0;
    for (const auto& [a, k] : c) m = std::max(m, k);
    const RhoResult r = rho_int(v);
    REQUIRE(r.value() == frac(big(m), big(std::uint64_t{1} << n)));
    // Erdos: rho <= C(n, n/2) / 2^n.
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), n, n / 2);
    REQUIRE(r.value() <= frac(binom, big(std::uint64_t{1} << n)));
  }
  const std::vector<std::int64_t> huge{2'000'000};
  REQUIRE_THROWS_AS(rho_int(huge), RangeTooLarge);
}

TEST_CASE("lazy walk", "[rho]") {
  REQUIRE(rho_half(ZpVector::zeros(PrimeModulus(5), 3)).value() == 1);
  const RhoResult one = rho_half(ZpVector(PrimeModulus(5), {1}));
  REQUIRE(one.value() == Rational(1, 2));
  REQUIRE(one.atom == 0);
  Stream rng(5);
  for (int i = 0; i < 60; ++i) {
    const PrimeModulus p(std::vector<std::uint64_t>{5, 7, 11}[rng.below(3)]);
    const ZpVector v = random_vector(rng, p, rng.below(7));
    const auto lazy = oracle::lazy_counts(raw(v), p.value());
    const RhoResult h = rho_half(v);
    REQUIRE(h.value() == frac(big(oracle::max_count(lazy)), big(std::uint64_t{1} << (2 * v.size()))));
    const auto doubled = oracle::sign_counts(raw(v.concat(v)), p.value());
    REQUIRE(h.value() == frac(big(oracle::max_count(doubled)), big(std::uint64_t{1} << (2 * v.size()))));
  }
}

TEST_CASE("exact rho comparison", "[rho]") {
  const RhoResult a{0, 3, 3};  // 3/8
  const RhoResult b{0, 1, 1};  // 1/2
  REQUIRE(rho_le(a, b));
  REQUIRE_FALSE(rho_le(b, a));
  REQUIRE(rho_le(a, a));
}

TEST_CASE("first Halasz bound", "[halasz]") {
  REQUIRE(halasz_first_bound(ZpVector::zeros(PrimeModulus(7), 4)) == Catch::Approx(1.0).epsilon(1e-15));
  const double expect = (1 + 2 * std::exp(-1.0 / 25) + 2 * std::exp(-4.0 / 25)) / 5;
  REQUIRE(std::abs(halasz_first_bound(ZpVector(PrimeModulus(5), {1})) - expect) < 1e-15);
}

TEST_CASE("second Halasz bound", "[halasz]") {
  const ZpVector v(PrimeModulus(7), {1, 2});
  // T_1(v) is all of Z_7: the largest weight is (3^2 + 1^2) / 49.
  REQUIRE(oracle::level_set({1, 2}, 7, Rational(1)).size() == 7);
  const double expect = 1.0 / 7 + std::exp(1.0) / 7 * std::exp(-1.0) * 7 + std::exp(-1.0);
  REQUIRE(std::abs(halasz_second_bound(v, Rational(1)) - expect) < 1e-12);
  REQUIRE(halasz_second_bound(v, Rational(3)) >= 1.0 / 7);
  REQUIRE_THROWS_AS(halasz_second_bound(ZpVector::zeros(PrimeModulus(7), 2), Rational(1)), PreconditionViolated);
}

TEST_CASE("Halasz bound on the all-ones vector", "[halasz]") {
  const ZpVector v(PrimeModulus(13), std::vector<Residue>(64, 1));
  const auto t1 = oracle::level_set(std::vector<std::uint64_t>(64, 1), 13, Rational(1));
  REQUIRE(t1 == std::vector<std::uint64_t>{0, 1, 12});
  const double expect = 3.0 / 13 + 4.0 * 3 / 13 + std::exp(-1.0);
  const double bound = halasz_bound(v, Rational(1));
  REQUIRE(std::abs(bound - expect) < 1e-12);
  REQUIRE(bound >= 3.0 / 13);
  REQUIRE(rho(v).to_double() <= bound);
  REQUIRE_THROWS_AS(halasz_bound(v, Rational(2)), PreconditionViolated);
}

TEST_CASE("Halasz chain on random vectors", "[halasz]") {
  Stream rng(21);
  for (int i = 0; i < 40; ++i) {
    const PrimeModulus p(std::vector<std::uint64_t>{5, 7, 31, 101}[rng.below(4)]);
    std::vector<Residue> e(64 + rng.below(100));
    for (auto& x : e) x = 1 + rng.below(p.value() - 1);
    const ZpVector v(p, e);
    const double r = rho(v).to_double();
    const double first = halasz_first_bound(v);
    REQUIRE(r <= first + 1e-12);
    for (std::size_t ell = 1; 64 * ell <= v.support(); ++ell) {
      const Rational l(static_cast<unsigned long>(ell));
      REQUIRE(first <= halasz_second_bound(v, l) + 1e-12);
      REQUIRE(halasz_second_bound(v, l) <= halasz_intermediate_bound(v, l) + 1e-12);
      REQUIRE(halasz_intermediate_bound(v, l) <= halasz_bound(v, l) + 1e-12);
    }
  }
}

TEST_CASE("sumsets", "[sumset]") {
  const PrimeModulus p(11);
  const ZpVector v(p, {1, 1});
  const Rational t(1, 10);
  const auto level = level_set(v, t).members;
  REQUIRE(level == ResidueSet{0, 1, 2, 9, 10});
  REQUIRE(sumset(level, 2, p) == ResidueSet{0, 1, 2, 3, 4, 7, 8, 9, 10});
  REQUIRE(level_set(v, Rational(4, 10)).members == sumset(level, 2, p));
  REQUIRE(sumset_level_check(v, 2, t));
  REQUIRE(sumset_level_check(v, 1, t));
  REQUIRE_THROWS_AS(sumset(ResidueSet{3}, 0, p), PreconditionViolated);

  Stream rng(4);
  for (int i = 0; i < 50; ++i) {
    const PrimeModulus q(std::vector<std::uint64_t>{5, 7, 13, 29}[rng.below(4)]);
    std::vector<Residue> e(1 + rng.below(10));
    for (auto& x : e) x = rng.below(q.value());
    REQUIRE(sumset_level_check(ZpVector(q, e), 1 + rng.below(4), Rational(static_cast<long>(rng.below(20)), 16)));
  }
}

TEST_CASE("Cauchy-Davenport", "[sumset]") {
  const PrimeModulus p(5);
  REQUIRE(sumset(ResidueSet{0, 1}, 2, p).size() == 3);
  REQUIRE(cauchy_davenport_check(ResidueSet{0, 1}, 2, p));
  const ResidueSet all{0, 1, 2, 3, 4};
  for (std::uint64_t m = 1; m <= 4; ++m) {
    REQUIRE(sumset(all, m, p) == all);
    REQUIRE(cauchy_davenport_check(all, m, p));
  }
}
