#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lolab/anticoncentration.hpp"
#include "lolab/errors.hpp"
#include "lolab/matrix_lab.hpp"
#include "lolab/rng.hpp"
#include "oracles.hpp"

using namespace lolab;

namespace {

oracle::Mat to_mat(const SymMatrix& m) {
  oracle::Mat a(m.size(), std::vector<std::int64_t>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) a[i][j] = m.at(i, j);
  }
  return a;
}

oracle::Mat to_mat(const FpMatrix& m) {
  oracle::Mat a(m.rows, std::vector<std::int64_t>(m.cols));
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) a[i][j] = static_cast<std::int64_t>(m(i, j));
  }
  return a;
}

Rational frac(std::uint64_t a, std::uint64_t b) {
  Rational r(mpz_class(static_cast<unsigned long>(a)), mpz_class(static_cast<unsigned long>(b)));
  r.canonicalize();
  return r;
}

ZpVector random_zp(std::size_t n, std::uint64_t p, Stream& rng) {
  std::vector<Residue> e(n);
  for (auto& x : e) x = rng.below(p);
  return ZpVector(PrimeModulus(p), e);
}

// Brute force Pr(M v = w) restricted to the rows in `rows`.
Rational match_oracle(const ZpVector& v, const ZpVector& w, const std::vector<std::size_t>& rows) {
  const std::size_t n = v.size();
  const auto p = static_cast<std::int64_t>(v.modulus().value());
  const std::uint64_t total = std::uint64_t{1} << SymMatrix::free_entries(n);
  std::uint64_t hits = 0;
  for (std::uint64_t code = 0; code < total; ++code) {
    const auto m = oracle::sign_matrix(n, code);
    bool ok = true;
    for (auto i : rows) {
      std::int64_t s = 0;
      for (std::size_t j = 0; j < n; ++j) s += m[i][j] * static_cast<std::int64_t>(v[j]);
      ok = ok && ((s % p) + p) % p == static_cast<std::int64_t>(w[i]);
    }
    hits += ok ? 1 : 0;
  }
  return frac(hits, total);
}

}  // namespace

TEST_CASE("symmetric sign matrices", "[matrix]") {
  Stream rng(1);
  const SymMatrix one = sample_symmetric(1, rng);
  REQUIRE(std::abs(one.at(0, 0)) == 1);
  REQUIRE_THROWS_AS(sample_symmetric(0, rng), PreconditionViolated);

  Stream a(9);
  Stream b(9);
  REQUIRE(sample_symmetric(20, a) == sample_symmetric(20, b));

  long sum = 0;
  std::size_t count = 0;
  for (int k = 0; k < 100; ++k) {
    const SymMatrix m = sample_symmetric(20, rng);
    for (std::size_t i = 0; i < 20; ++i) {
      for (std::size_t j = 0; j < 20; ++j) {
        REQUIRE(m.at(i, j) == m.at(j, i));
        if (i <= j) {
          sum += m.at(i, j);
          ++count;
        }
      }
    }
  }
  REQUIRE(std::abs(static_cast<double>(sum)) <= 4 * std::sqrt(static_cast<double>(count)));

  for (std::uint64_t code = 0; code < 64; ++code) {
    REQUIRE(to_mat(SymMatrix::from_code(3, code)) == oracle::sign_matrix(3, code));
  }
}

TEST_CASE("exact determinants", "[matrix]") {
  SymMatrix ones(2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = i; j < 2; ++j) ones.set(i, j, 1);
  }
  REQUIRE(det_exact(ones) == 0);
  REQUIRE(is_singular(ones));

  Stream rng(4);
  for (int k = 0; k < 30; ++k) {
    const std::size_t n = 1 + rng.below(10);
    const SymMatrix m = sample_symmetric(n, rng);
    REQUIRE(det_exact(m) == oracle::bareiss_det(to_mat(m)));
  }
  REQUIRE_THROWS_AS(det_exact(SymMatrix(65)), GuardExceeded);
}

TEST_CASE("ranks and determinants over F_p", "[matrix]") {
  const PrimeModulus p(7);
  Stream rng(5);
  for (int k = 0; k < 100; ++k) {
    const std::size_t r = 1 + rng.below(6);
    const std::size_t c = 1 + rng.below(6);
    FpMatrix m(r, c);
    for (auto& x : m.a) x = rng.bernoulli(1, 2) ? 0 : rng.below(7);
    REQUIRE(rank_mod_p(m, p) == oracle::rank_mod(to_mat(m), 7));
    if (r == c) {
      REQUIRE(static_cast<std::int64_t>(det_mod_p(m, p)) == oracle::laplace_det(to_mat(m), 7));
      const auto adj = adjugate(m, p);
      REQUIRE(to_mat(adj) == oracle::cofactor_adjugate(to_mat(m), 7));
      if (det_mod_p(m, p) != 0) {
        const FpMatrix id = multiply(m, inverse_mod_p(m, p), p);
        for (std::size_t i = 0; i < r; ++i) {
          for (std::size_t j = 0; j < r; ++j) REQUIRE(id(i, j) == (i == j ? 1U : 0U));
        }
      } else {
        REQUIRE_THROWS_AS(inverse_mod_p(m, p), SingularMatrix);
      }
    }
  }
  FpMatrix all(4, 4);
  for (auto& x : all.a) x = 1;
  REQUIRE(rank_mod_p(all, p) == 1);
}

TEST_CASE("exhaustive singularity probabilities", "[matrix]") {
  for (std::size_t n = 1; n <= 5; ++n) {
    const std::uint64_t total = std::uint64_t{1} << SymMatrix::free_entries(n);
    std::uint64_t singular = 0;
    for (std::uint64_t code = 0; code < total; ++code) {
      singular += oracle::bareiss_det(oracle::sign_matrix(n, code)) == 0 ? 1 : 0;
    }
    REQUIRE(singularity_exact(n) == frac(singular, total));
  }
  REQUIRE(singularity_exact(1) == 0);
  REQUIRE(singularity_exact(2) == frac(1, 2));
  REQUIRE(singularity_exact(3) == frac(1, 2));
  REQUIRE(singularity_exact(4) == frac(1, 2));
  REQUIRE(singularity_exact(5) == frac(31, 64));
  REQUIRE(singularity_exact(6) == frac(3543, 8192));
  REQUIRE_THROWS_AS(singularity_exact(7), GuardExceeded);
}

TEST_CASE("Monte Carlo singularity", "[matrix]") {
  Stream rng(42);
  REQUIRE_THROWS_AS(singularity_mc(2, 0, rng), DegenerateInput);
  const SingularityEstimate e = singularity_mc(2, 20000, rng);
  REQUIRE(e.wilsonLo <= 0.5);
  REQUIRE(e.wilsonHi >= 0.5);
  REQUIRE(e.singularCount <= e.fieldSingularCount);
  REQUIRE(e.conjectureValue == Catch::Approx(4 * 0.5));

  const SingularityEstimate one = singularity_mc(6, 3000, rng, 1);
  const SingularityEstimate three = singularity_mc(6, 3000, rng, 3);
  REQUIRE(one.singularCount == three.singularCount);
  REQUIRE(one.fieldSingularCount == three.fieldSingularCount);

  const auto [lo, hi] = wilson95(0, 10);
  REQUIRE(lo == 0);
  REQUIRE(hi > 0);
  REQUIRE(hi < 0.35);
}

TEST_CASE("match and block probabilities", "[matrix]") {
  Stream rng(6);
  for (int k = 0; k < 30; ++k) {
    const std::size_t n = 1 + rng.below(4);
    const ZpVector v = random_zp(n, 5, rng);
    const ZpVector w = random_zp(n, 5, rng);
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    REQUIRE(match_probability_exact(v, w) == match_oracle(v, w, all));

    IndexSet X;
    IndexSet Y;
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = rng.below(3);
      if (c == 0) X.push_back(i);
      if (c == 1) Y.push_back(i);
    }
    const BlockProbability b = block_probability_exact(v, w, X, Y);
    REQUIRE(b.probability == match_oracle(v, w, X));
    Rational bound = 1;
    for (std::size_t i = 0; i < X.size(); ++i) bound *= rho(v.restrict(Y)).value();
    REQUIRE(b.bound == bound);
    REQUIRE(b.holds == (b.probability <= b.bound));
  }
  const ZpVector v(PrimeModulus(5), {1, 2});
  REQUIRE_THROWS_AS(block_probability_exact(v, v, {0}, {0, 1}), PreconditionViolated);
  REQUIRE_THROWS_AS(match_probability_exact(ZpVector::zeros(PrimeModulus(5), 5), ZpVector::zeros(PrimeModulus(5), 5)),
                    GuardExceeded);
}

TEST_CASE("sign vectors in a subspace", "[matrix]") {
  const PrimeModulus p(7);
  const OdlyzkoResult ones = odlyzko_check({{1, 1, 1, 1}}, 4, p);
  REQUIRE(ones.count == 2);
  REQUIRE(ones.holds);
  REQUIRE_THROWS_AS(odlyzko_check({{1, 2, 3}, {2, 4, 6}}, 3, p), DependentBasis);

  Stream rng(7);
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = 2 + rng.below(6);
    const std::size_t dim = 1 + rng.below(n);
    std::vector<std::vector<Residue>> basis(dim, std::vector<Residue>(n));
    for (auto& b : basis) {
      for (auto& x : b) x = rng.below(7);
    }
    oracle::Mat m;
    for (const auto& b : basis) m.emplace_back(b.begin(), b.end());
    if (oracle::rank_mod(m, 7) < dim) {
      REQUIRE_THROWS_AS(odlyzko_check(basis, n, p), DependentBasis);
      continue;
    }
    std::uint64_t count = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
      oracle::Mat ext = m;
      std::vector<std::int64_t> u(n);
      for (std::size_t i = 0; i < n; ++i) u[i] = ((s >> i) & 1U) != 0 ? 6 : 1;
      ext.push_back(u);
      count += oracle::rank_mod(ext, 7) == dim ? 1 : 0;
    }
    const OdlyzkoResult r = odlyzko_check(basis, n, p);
    REQUIRE(r.count == count);
    REQUIRE(r.holds);
  }
}

TEST_CASE("adjugate of a corank one minor", "[matrix]") {
  const PrimeModulus p(7);
  FpMatrix m(3, 3);
  const Residue e[9] = {1, 2, 3, 2, 1, 1, 3, 1, 1};
  m.a.assign(e, e + 9);
  REQUIRE(adjugate_rank1_check(m, p).ok());

  FpMatrix full(3, 3);
  const Residue f[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  full.a.assign(f, f + 9);
  REQUIRE_THROWS_AS(adjugate_rank1_check(full, p), PreconditionViolated);

  Stream rng(8);
  int checked = 0;
  while (checked < 20) {
    const std::size_t n = 3 + rng.below(3);
    FpMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) r(i, j) = r(j, i) = rng.below(7);
    }
    if (rank_mod_p(r.drop_first(), p) + 2 != n) continue;
    const CheckReport rep = adjugate_rank1_check(r, p);
    INFO(rep.failures().size());
    REQUIRE(rep.ok());
    ++checked;
  }
}

TEST_CASE("decoupling", "[matrix]") {
  const PrimeModulus p(5);
  FpMatrix id(2, 2);
  id(0, 0) = id(1, 1) = 1;
  REQUIRE(decoupling_identity_check(id, {1, 1}, {1, 1}, {0}, {1}, p));
  REQUIRE(decoupling_identity_check(id, {1, -1}, {-1, 1}, {0}, {1}, p));
  REQUIRE_THROWS_AS(decoupling_identity_check(id, {1, 1}, {1, 1}, {0}, {0, 1}, p), PreconditionViolated);

  const DecouplingResult always = decoupling_probability_check({frac(1, 2), frac(1, 2)}, {Rational(1)},
                                                               {{true}, {true}});
  REQUIRE(always.single == 1);
  REQUIRE(always.fourfold == 1);
  REQUIRE(always.holds);

  const DecouplingResult never = decoupling_probability_check({Rational(1)}, {Rational(1)}, {{false}});
  REQUIRE(never.single == 0);
  REQUIRE(never.holds);

  // E = {X = Y} on two fair bits: Pr(E) = 1/2 and the fourfold event is X = X' = Y = Y'.
  const DecouplingResult diag = decoupling_probability_check({frac(1, 2), frac(1, 2)}, {frac(1, 2), frac(1, 2)},
                                                             {{true, false}, {false, true}});
  REQUIRE(diag.single == frac(1, 2));
  REQUIRE(diag.fourfold == frac(1, 8));
  REQUIRE(diag.holds);
}

TEST_CASE("q over small fields", "[matrix]") {
  const PrimeModulus p(5);
  REQUIRE(q_exact(2, p, frac(4, 5), {0, 0}).q == 0);
  REQUIRE_THROWS_AS(q_exact(2, p, frac(1, 2), {0, 0}, false, true), PreconditionViolated);

  // Oracle: enumerate the 8 matrices and 24 nonzero v directly.
  Stream rng(10);
  for (int k = 0; k < 10; ++k) {
    const std::vector<Residue> w = {rng.below(5), rng.below(5)};
    const Rational beta = frac(1 + rng.below(2), 4);
    std::uint64_t hits = 0;
    for (std::uint64_t code = 0; code < 8; ++code) {
      const auto m = oracle::sign_matrix(2, code);
      bool any = false;
      for (std::uint64_t a = 0; a < 5 && !any; ++a) {
        for (std::uint64_t b = 0; b < 5 && !any; ++b) {
          if (a == 0 && b == 0) continue;
          const auto c = oracle::sign_counts({a, b}, 5);
          if (frac(oracle::max_count(c), 4) < beta) continue;
          bool eq = true;
          for (std::size_t i = 0; i < 2; ++i) {
            const std::int64_t s = m[i][0] * static_cast<std::int64_t>(a) + m[i][1] * static_cast<std::int64_t>(b);
            eq = eq && ((s % 5) + 5) % 5 == static_cast<std::int64_t>(w[i]);
          }
          any = eq;
        }
      }
      hits += any ? 1 : 0;
    }
    REQUIRE(q_exact(2, p, beta, w).q == frac(hits, 8));
  }
  const QResult best = q_exact(2, p, frac(1, 4), {}, true);
  REQUIRE(best.w.size() == 2);
  REQUIRE(q_exact(2, p, frac(1, 4), best.w).q == best.q);
}

TEST_CASE("rank profile", "[matrix]") {
  const PrimeModulus p(5);
  Stream rng(12);
  const RankProfile r = rank_profile_mc(2, 20000, p, rng);
  std::uint64_t total = 0;
  std::uint64_t rankOne = 0;
  for (const auto& [key, count] : r.joint) {
    total += count;
    if (key.first == 1) rankOne += count;
  }
  REQUIRE(total == 20000);
  REQUIRE(r.interlacing);
  const double f = static_cast<double>(rankOne) / 20000;
  REQUIRE(std::abs(f - 0.5) < 4 * std::sqrt(0.25 / 20000));

  const RankProfile a = rank_profile_mc(6, 500, p, rng, 1);
  const RankProfile b = rank_profile_mc(6, 500, p, rng, 3);
  REQUIRE(a.joint == b.joint);
  REQUIRE_THROWS_AS(rank_profile_mc(2, 0, p, rng), DegenerateInput);
}
