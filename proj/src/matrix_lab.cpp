#include "lolab/matrix_lab.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "lolab/anticoncentration.hpp"
#include "lolab/errors.hpp"
#include "lolab/parallel.hpp"

namespace lolab {

SymMatrix::SymMatrix(std::size_t n) : n_(n), bits_((free_entries(n) + 63) / 64, 0) {}

std::size_t SymMatrix::slot(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  // Row i of the upper triangle starts after i rows of lengths n, n-1, ...
  return i * n_ - i * (i - 1) / 2 + (j - i);
}

SymMatrix SymMatrix::from_code(std::size_t n, std::uint64_t code) {
  if (free_entries(n) > 64) throw GuardExceeded("from_code needs n(n+1)/2 <= 64");
  SymMatrix m(n);
  if (!m.bits_.empty()) {
    const std::size_t k = free_entries(n);
    m.bits_[0] = k == 64 ? code : code & ((std::uint64_t{1} << k) - 1);
  }
  return m;
}

int SymMatrix::at(std::size_t i, std::size_t j) const {
  const std::size_t s = slot(i, j);
  return ((bits_[s / 64] >> (s % 64)) & 1U) != 0 ? -1 : 1;
}

void SymMatrix::set(std::size_t i, std::size_t j, int sign) {
  const std::size_t s = slot(i, j);
  const std::uint64_t mask = std::uint64_t{1} << (s % 64);
  if (sign < 0) {
    bits_[s / 64] |= mask;
  } else {
    bits_[s / 64] &= ~mask;
  }
}

SymMatrix SymMatrix::drop_first() const {
  if (n_ == 0) throw PreconditionViolated("cannot drop a row from an empty matrix");
  SymMatrix m(n_ - 1);
  for (std::size_t i = 1; i < n_; ++i) {
    for (std::size_t j = i; j < n_; ++j) m.set(i - 1, j - 1, at(i, j));
  }
  return m;
}

SymMatrix sample_symmetric(std::size_t n, Stream& rng) {
  if (n == 0) throw PreconditionViolated("dimension must be positive");
  SymMatrix m(n);
  std::uint64_t word = 0;
  unsigned left = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (left == 0) {
        word = rng.next();
        left = 64;
      }
      m.set(i, j, (word & 1U) != 0 ? -1 : 1);
      word >>= 1U;
      --left;
    }
  }
  return m;
}

FpMatrix FpMatrix::from_signs(const SymMatrix& m, const PrimeModulus& p) {
  const std::size_t n = m.size();
  FpMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = m.at(i, j) > 0 ? 1 : p.value() - 1;
  }
  return out;
}

bool FpMatrix::is_symmetric() const {
  if (rows != cols) return false;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = i + 1; j < cols; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) return false;
    }
  }
  return true;
}

FpMatrix FpMatrix::drop_first() const {
  if (rows == 0 || cols == 0) throw PreconditionViolated("cannot drop a row from an empty matrix");
  FpMatrix out(rows - 1, cols - 1);
  for (std::size_t i = 1; i < rows; ++i) {
    for (std::size_t j = 1; j < cols; ++j) out(i - 1, j - 1) = (*this)(i, j);
  }
  return out;
}

FpMatrix multiply(const FpMatrix& x, const FpMatrix& y, const PrimeModulus& p) {
  if (x.cols != y.rows) throw PreconditionViolated("dimension mismatch in product");
  FpMatrix out(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t k = 0; k < x.cols; ++k) {
      const Residue a = x(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) out(i, j) = p.add(out(i, j), p.mul(a, y(k, j)));
    }
  }
  return out;
}

namespace {

// Reduces m to row echelon form in place; returns the rank and the
// determinant factor (product of pivots times the sign of the permutation).
std::size_t eliminate(FpMatrix& m, const PrimeModulus& p, Residue* det) {
  std::size_t rank = 0;
  Residue d = 1;
  for (std::size_t c = 0; c < m.cols && rank < m.rows; ++c) {
    std::size_t piv = rank;
    while (piv < m.rows && m(piv, c) == 0) ++piv;
    if (piv == m.rows) {
      d = 0;
      continue;
    }
    if (piv != rank) {
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(rank, j));
      d = p.neg(d);
    }
    const Residue pv = m(rank, c);
    d = p.mul(d, pv);
    const Residue inv = p.inv(pv);
    for (std::size_t i = rank + 1; i < m.rows; ++i) {
      if (m(i, c) == 0) continue;
      const Residue f = p.mul(m(i, c), inv);
      for (std::size_t j = c; j < m.cols; ++j) m(i, j) = p.sub(m(i, j), p.mul(f, m(rank, j)));
    }
    ++rank;
  }
  if (det != nullptr) *det = rank == m.rows && m.rows == m.cols ? d : 0;
  return rank;
}

}  // namespace

std::size_t rank_mod_p(FpMatrix m, const PrimeModulus& p) { return eliminate(m, p, nullptr); }

Residue det_mod_p(FpMatrix m, const PrimeModulus& p) {
  if (m.rows != m.cols) throw PreconditionViolated("determinant of a non-square matrix");
  if (m.rows == 0) return 1;
  Residue d = 0;
  eliminate(m, p, &d);
  return d;
}

FpMatrix inverse_mod_p(const FpMatrix& m, const PrimeModulus& p) {
  if (m.rows != m.cols) throw PreconditionViolated("inverse of a non-square matrix");
  const std::size_t n = m.rows;
  FpMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && aug(piv, c) == 0) ++piv;
    if (piv == n) throw SingularMatrix("matrix is singular over F_" + std::to_string(p.value()));
    if (piv != c) {
      for (std::size_t j = 0; j < 2 * n; ++j) std::swap(aug(piv, j), aug(c, j));
    }
    const Residue inv = p.inv(aug(c, c));
    for (std::size_t j = 0; j < 2 * n; ++j) aug(c, j) = p.mul(aug(c, j), inv);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || aug(i, c) == 0) continue;
      const Residue f = aug(i, c);
      for (std::size_t j = 0; j < 2 * n; ++j) aug(i, j) = p.sub(aug(i, j), p.mul(f, aug(c, j)));
    }
  }
  FpMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
  }
  return out;
}

FpMatrix adjugate(const FpMatrix& m, const PrimeModulus& p) {
  if (m.rows != m.cols) throw PreconditionViolated("adjugate of a non-square matrix");
  const std::size_t n = m.rows;
  FpMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      FpMatrix minor(n - 1, n - 1);
      for (std::size_t r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      const Residue d = det_mod_p(std::move(minor), p);
      adj(j, i) = (i + j) % 2 == 0 ? d : p.neg(d);
    }
  }
  return adj;
}

namespace {

const std::vector<PrimeModulus>& crt_primes() {
  static const std::vector<PrimeModulus> primes = [] {
    std::vector<PrimeModulus> out;
    std::uint64_t c = (std::uint64_t{1} << 61U) - 1;
    while (out.size() < 8) {
      if (is_prime_u64(c)) out.emplace_back(c);
      c -= 2;
    }
    return out;
  }();
  return primes;
}

// Number of CRT primes whose product P satisfies P^2 > 4 n^n, i.e. P > 2 n^{n/2}.
std::size_t primes_needed(std::size_t n) {
  BigInt bound;
  mpz_ui_pow_ui(bound.get_mpz_t(), n, n);
  bound *= 4;
  BigInt prod = 1;
  std::size_t k = 0;
  for (const auto& q : crt_primes()) {
    prod *= static_cast<unsigned long>(q.value());
    ++k;
    if (prod * prod > bound) return k;
  }
  throw GuardExceeded("not enough CRT primes");
}

void require_dimension(std::size_t n) {
  if (n > kMaxDimension) throw GuardExceeded("dimension above " + std::to_string(kMaxDimension));
}

}  // namespace

BigInt det_exact(const SymMatrix& m) {
  const std::size_t n = m.size();
  require_dimension(n);
  if (n == 0) return 1;
  const std::size_t k = primes_needed(n);
  BigInt x = 0;
  BigInt mod = 1;
  for (std::size_t i = 0; i < k; ++i) {
    const PrimeModulus& q = crt_primes()[i];
    const Residue r = det_mod_p(FpMatrix::from_signs(m, q), q);
    // Garner step: x += mod * ((r - x) * mod^{-1} mod q)
    BigInt xm;
    mpz_fdiv_r_ui(xm.get_mpz_t(), x.get_mpz_t(), q.value());
    BigInt mm;
    mpz_fdiv_r_ui(mm.get_mpz_t(), mod.get_mpz_t(), q.value());
    const Residue diff = q.sub(r, xm.get_ui());
    const Residue h = q.mul(diff, q.inv(mm.get_ui()));
    x += mod * static_cast<unsigned long>(h);
    mod *= static_cast<unsigned long>(q.value());
  }
  if (2 * x > mod) x -= mod;
  return x;
}

bool is_singular(const SymMatrix& m) {
  require_dimension(m.size());
  if (m.size() == 0) return false;
  if (primes_needed(m.size()) == 1) {
    const PrimeModulus& q = crt_primes()[0];
    return det_mod_p(FpMatrix::from_signs(m, q), q) == 0;
  }
  return sgn(det_exact(m)) == 0;
}

Rational singularity_exact(std::size_t n) {
  if (n == 0 || n > 6) throw GuardExceeded("exhaustive singularity needs 1 <= n <= 6");
  const std::size_t k = SymMatrix::free_entries(n);
  const std::uint64_t total = std::uint64_t{1} << k;
  std::uint64_t singular = 0;
  for (std::uint64_t code = 0; code < total; ++code) {
    if (is_singular(SymMatrix::from_code(n, code))) ++singular;
  }
  Rational r(BigInt(static_cast<unsigned long>(singular)), BigInt(static_cast<unsigned long>(total)));
  r.canonicalize();
  return r;
}

std::pair<double, double> wilson95(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw DegenerateInput("Wilson interval needs at least one trial");
  const double z = 1.959963984540054;
  const double nn = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double centre = (ph + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z / (1 + z2 / nn) * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

SingularityEstimate singularity_mc(std::size_t n, std::uint64_t trials, const Stream& rng, unsigned workers,
                                   std::uint64_t fieldPrime) {
  if (trials == 0) throw DegenerateInput("singularity_mc needs at least one trial");
  if (n == 0) throw PreconditionViolated("dimension must be positive");
  require_dimension(n);
  const PrimeModulus fp(fieldPrime);
  std::uint64_t singular = 0;
  std::uint64_t field_singular = 0;
  std::mutex mu;
  parallel_for(trials, workers, [&](std::size_t begin, std::size_t end) {
    std::uint64_t s = 0;
    std::uint64_t f = 0;
    for (std::size_t i = begin; i < end; ++i) {
      Stream t = rng.child(static_cast<std::uint64_t>(i));
      const SymMatrix m = sample_symmetric(n, t);
      if (det_mod_p(FpMatrix::from_signs(m, fp), fp) == 0) {
        ++f;
        // Integer singularity implies singularity mod p.
        if (is_singular(m)) ++s;
      }
    }
    std::lock_guard<std::mutex> lock(mu);
    singular += s;
    field_singular += f;
  });
  SingularityEstimate e;
  e.n = n;
  e.trials = trials;
  e.singularCount = singular;
  e.fieldPrime = fieldPrime;
  e.fieldSingularCount = field_singular;
  e.pointEstimate = static_cast<double>(singular) / static_cast<double>(trials);
  std::tie(e.wilsonLo, e.wilsonHi) = wilson95(singular, trials);
  const double nn = static_cast<double>(n);
  e.conjectureValue = nn * nn * std::ldexp(1.0, 1 - static_cast<int>(n));
  e.paperShape = std::exp(-std::ldexp(1.0, -15) * std::sqrt(nn));
  return e;
}

namespace {

constexpr std::size_t kExhaustiveLimit = 4;

void require_tiny(std::size_t n) {
  if (n == 0 || n > kExhaustiveLimit) throw GuardExceeded("exhaustive matrix enumeration needs 1 <= n <= 4");
}

// Row i of M v over F_p.
Residue row_dot(const SymMatrix& m, std::size_t i, const ZpVector& v) {
  const PrimeModulus& p = v.modulus();
  Residue s = 0;
  for (std::size_t j = 0; j < m.size(); ++j) s = m.at(i, j) > 0 ? p.add(s, v[j]) : p.sub(s, v[j]);
  return s;
}

Rational fraction(std::uint64_t a, std::uint64_t b) {
  Rational r(BigInt(static_cast<unsigned long>(a)), BigInt(static_cast<unsigned long>(b)));
  r.canonicalize();
  return r;
}

}  // namespace

Rational match_probability_exact(const ZpVector& v, const ZpVector& w) {
  const std::size_t n = v.size();
  require_tiny(n);
  if (w.size() != n || !(w.modulus() == v.modulus())) throw PreconditionViolated("v and w must match");
  const std::uint64_t total = std::uint64_t{1} << SymMatrix::free_entries(n);
  std::uint64_t hits = 0;
  for (std::uint64_t code = 0; code < total; ++code) {
    const SymMatrix m = SymMatrix::from_code(n, code);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = row_dot(m, i, v) == w[i];
    if (ok) ++hits;
  }
  return fraction(hits, total);
}

BlockProbability block_probability_exact(const ZpVector& v, const ZpVector& w, const IndexSet& X,
                                         const IndexSet& Y) {
  const std::size_t n = v.size();
  require_tiny(n);
  if (w.size() != n || !(w.modulus() == v.modulus())) throw PreconditionViolated("v and w must match");
  for (auto i : X) {
    if (i >= n) throw PreconditionViolated("row index out of range");
  }
  for (auto i : Y) {
    if (i >= n) throw PreconditionViolated("column index out of range");
  }
  if (!disjoint(X, Y)) throw PreconditionViolated("X and Y must be disjoint");
  const std::uint64_t total = std::uint64_t{1} << SymMatrix::free_entries(n);
  std::uint64_t hits = 0;
  for (std::uint64_t code = 0; code < total; ++code) {
    const SymMatrix m = SymMatrix::from_code(n, code);
    bool ok = true;
    for (auto i : X) {
      if (row_dot(m, i, v) != w[i]) {
        ok = false;
        break;
      }
    }
    if (ok) ++hits;
  }
  BlockProbability out;
  out.probability = fraction(hits, total);
  const RhoResult r = rho(v.restrict(Y));
  Rational base = r.value();
  Rational bound = 1;
  for (std::size_t i = 0; i < X.size(); ++i) bound *= base;
  bound.canonicalize();
  out.bound = bound;
  out.holds = out.probability <= out.bound;
  return out;
}

OdlyzkoResult odlyzko_check(const std::vector<std::vector<Residue>>& basis, std::size_t n,
                            const PrimeModulus& p) {
  if (n > 14) throw GuardExceeded("odlyzko_check enumerates {-1,1}^n and needs n <= 14");
  const std::size_t k = basis.size();
  FpMatrix b(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    if (basis[i].size() != n) throw PreconditionViolated("basis vectors must have length n");
    for (std::size_t j = 0; j < n; ++j) b(i, j) = basis[i][j] % p.value();
  }
  // Reduced row echelon form of the basis.
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < k; ++c) {
    std::size_t piv = r;
    while (piv < k && b(piv, c) == 0) ++piv;
    if (piv == k) continue;
    for (std::size_t j = 0; j < n; ++j) std::swap(b(piv, j), b(r, j));
    const Residue inv = p.inv(b(r, c));
    for (std::size_t j = 0; j < n; ++j) b(r, j) = p.mul(b(r, j), inv);
    for (std::size_t i = 0; i < k; ++i) {
      if (i == r || b(i, c) == 0) continue;
      const Residue f = b(i, c);
      for (std::size_t j = 0; j < n; ++j) b(i, j) = p.sub(b(i, j), p.mul(f, b(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  if (r < k) throw DependentBasis("basis vectors are linearly dependent over F_" + std::to_string(p.value()));
  OdlyzkoResult out;
  std::vector<Residue> x(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t j = 0; j < n; ++j) x[j] = ((mask >> j) & 1U) != 0 ? p.value() - 1 : 1;
    std::vector<Residue> y = x;
    for (std::size_t i = 0; i < k; ++i) {
      const Residue f = y[pivots[i]];
      if (f == 0) continue;
      for (std::size_t j = 0; j < n; ++j) y[j] = p.sub(y[j], p.mul(f, b(i, j)));
    }
    if (std::all_of(y.begin(), y.end(), [](Residue t) { return t == 0; })) ++out.count;
  }
  out.holds = out.count <= (std::uint64_t{1} << k);
  return out;
}

CheckReport adjugate_rank1_check(const FpMatrix& m, const PrimeModulus& p) {
  if (m.rows != m.cols || m.rows < 2) throw PreconditionViolated("need a square matrix of size at least 2");
  if (!m.is_symmetric()) throw PreconditionViolated("matrix must be symmetric");
  const std::size_t n = m.rows;
  const FpMatrix minor = m.drop_first();
  const std::size_t rk = rank_mod_p(minor, p);
  if (rk + 2 != n) {
    throw PreconditionViolated("M_{n-1} must have rank n - 2, got " + std::to_string(rk));
  }
  CheckReport r;
  const FpMatrix adj = adjugate(minor, p);
  const FpMatrix prod = multiply(minor, adj, p);
  r.add("kernel", std::all_of(prod.a.begin(), prod.a.end(), [](Residue x) { return x == 0; }));
  r.add("adjugate_rank_one", rank_mod_p(adj, p) == 1);
  r.add("adjugate_symmetric", adj.is_symmetric());

  // First nontrivial column a; lambda = 1 / a_j0 where a_j0 = c_{j0 j0}.
  const std::size_t d = minor.rows;
  std::size_t j0 = d;
  for (std::size_t j = 0; j < d && j0 == d; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      if (adj(i, j) != 0) {
        j0 = j;
        break;
      }
    }
  }
  bool factor = j0 < d && adj(j0, j0) != 0;
  std::vector<Residue> a(d, 0);
  if (factor) {
    for (std::size_t i = 0; i < d; ++i) a[i] = adj(i, j0);
    const Residue lambda = p.inv(adj(j0, j0));
    for (std::size_t i = 0; i < d && factor; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        if (adj(i, j) != p.mul(lambda, p.mul(a[i], a[j]))) {
          factor = false;
          break;
        }
      }
    }
  }
  r.add("factorisation", factor);

  // det M_n = x_1 det M_{n-1} - sum c_ij x_i x_j with x the first row.
  Residue quad = 0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) quad = p.add(quad, p.mul(adj(i, j), p.mul(m(0, i + 1), m(0, j + 1))));
  }
  const Residue det_n = det_mod_p(m, p);
  const Residue expansion = p.sub(p.mul(m(0, 0), det_mod_p(minor, p)), quad);
  r.add("cofactor_expansion", det_n == expansion);
  Residue lin = 0;
  for (std::size_t i = 0; i < d; ++i) lin = p.add(lin, p.mul(a[i], m(0, i + 1)));
  r.add("first_row_relation", det_n != 0 || lin == 0);
  return r;
}

bool decoupling_identity_check(const FpMatrix& m, const std::vector<int>& u, const std::vector<int>& u2,
                               const IndexSet& I, const IndexSet& J, const PrimeModulus& p) {
  const std::size_t n = m.rows;
  if (u.size() != n || u2.size() != n) throw PreconditionViolated("sign vectors must match the matrix size");
  if (!disjoint(I, J) || set_union(I, J) != full_index_set(n)) {
    throw PreconditionViolated("I and J must partition the coordinates");
  }
  const FpMatrix a = inverse_mod_p(m, p);
  auto to_res = [&](int s) { return p.reduce(s); };
  auto mixed = [&](const std::vector<int>& xs, const std::vector<int>& ys) {
    std::vector<Residue> v(n);
    for (auto i : I) v[i] = to_res(xs[i]);
    for (auto j : J) v[j] = to_res(ys[j]);
    return v;
  };
  auto form = [&](const std::vector<Residue>& v) {
    Residue s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) s = p.add(s, p.mul(v[i], p.mul(a(i, j), v[j])));
    }
    return s;
  };
  const Residue lhs = p.add(p.sub(p.sub(form(mixed(u, u)), form(mixed(u2, u))), form(mixed(u, u2))),
                            form(mixed(u2, u2)));
  std::vector<Residue> w(n), wj(n, 0);
  for (std::size_t i = 0; i < n; ++i) w[i] = p.reduce(u[i] - u2[i]);
  for (auto j : J) wj[j] = w[j];
  Residue rhs = 0;
  for (auto i : I) {
    Residue z = 0;
    for (std::size_t j = 0; j < n; ++j) z = p.add(z, p.mul(a(i, j), wj[j]));
    rhs = p.add(rhs, p.mul(z, w[i]));
  }
  rhs = p.add(rhs, rhs);
  return lhs == rhs;
}

DecouplingResult decoupling_probability_check(const std::vector<Rational>& lawX,
                                              const std::vector<Rational>& lawY,
                                              const std::vector<std::vector<bool>>& event) {
  if (lawX.size() > 16 || lawY.size() > 16) throw GuardExceeded("decoupling supports are limited to 16 atoms");
  if (event.size() != lawX.size()) throw PreconditionViolated("event rows must match the law of X");
  for (const auto& row : event) {
    if (row.size() != lawY.size()) throw PreconditionViolated("event columns must match the law of Y");
  }
  auto check_law = [](const std::vector<Rational>& law) {
    Rational s = 0;
    for (const auto& q : law) {
      if (sgn(q) < 0) throw PreconditionViolated("probabilities must be nonnegative");
      s += q;
    }
    if (!law.empty() && s != 1) throw PreconditionViolated("a law must sum to 1");
  };
  check_law(lawX);
  check_law(lawY);
  DecouplingResult out;
  out.single = 0;
  for (std::size_t x = 0; x < lawX.size(); ++x) {
    for (std::size_t y = 0; y < lawY.size(); ++y) {
      if (event[x][y]) out.single += lawX[x] * lawY[y];
    }
  }
  out.fourfold = 0;
  for (std::size_t x = 0; x < lawX.size(); ++x) {
    for (std::size_t x2 = 0; x2 < lawX.size(); ++x2) {
      for (std::size_t y = 0; y < lawY.size(); ++y) {
        if (!event[x][y] || !event[x2][y]) continue;
        for (std::size_t y2 = 0; y2 < lawY.size(); ++y2) {
          if (event[x][y2] && event[x2][y2]) out.fourfold += lawX[x] * lawX[x2] * lawY[y] * lawY[y2];
        }
      }
    }
  }
  out.single.canonicalize();
  out.fourfold.canonicalize();
  Rational s4 = out.single * out.single;
  s4 *= s4;
  out.holds = s4 <= out.fourfold;
  return out;
}

QResult q_exact(std::size_t n, const PrimeModulus& p, const Rational& beta, const std::vector<Residue>& w,
                bool maximise, bool strict) {
  if (n == 0) throw PreconditionViolated("dimension must be positive");
  if (strict && beta * static_cast<unsigned long>(p.value()) < 4) {
    throw PreconditionViolated("beta must be at least 4/p in strict mode");
  }
  BigInt cost;
  mpz_ui_pow_ui(cost.get_mpz_t(), p.value(), n);
  const BigInt vectors = cost;
  cost <<= SymMatrix::free_entries(n);
  if (maximise) cost *= vectors;
  if (SymMatrix::free_entries(n) > 63 || cost > 100'000'000) throw GuardExceeded("q_exact enumeration too large");
  if (!maximise && w.size() != n) throw PreconditionViolated("w must have length n");

  const std::uint64_t nv = vectors.get_ui();
  const std::uint64_t q = p.value();
  auto decode = [&](std::uint64_t code) {
    std::vector<Residue> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = code % q;
      code /= q;
    }
    return v;
  };
  // Vectors v != 0 with rho(v) >= beta.
  std::vector<std::vector<Residue>> heavy;
  for (std::uint64_t code = 1; code < nv; ++code) {
    std::vector<Residue> v = decode(code);
    if (rho(ZpVector(p, v)).value() >= beta) heavy.push_back(std::move(v));
  }
  const std::uint64_t total = std::uint64_t{1} << SymMatrix::free_entries(n);
  auto probability = [&](const std::vector<Residue>& target) {
    std::uint64_t hits = 0;
    for (std::uint64_t code = 0; code < total; ++code) {
      const SymMatrix m = SymMatrix::from_code(n, code);
      for (const auto& v : heavy) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
          Residue s = 0;
          for (std::size_t j = 0; j < n; ++j) s = m.at(i, j) > 0 ? p.add(s, v[j]) : p.sub(s, v[j]);
          ok = s == target[i];
        }
        if (ok) {
          ++hits;
          break;
        }
      }
    }
    return fraction(hits, total);
  };
  QResult out;
  if (!maximise) {
    for (auto x : w) {
      if (x >= q) throw RangeError("w entries must be residues");
    }
    out.q = probability(w);
    out.w = w;
    return out;
  }
  out.q = -1;
  for (std::uint64_t code = 0; code < nv; ++code) {
    const std::vector<Residue> target = decode(code);
    const Rational r = probability(target);
    if (r > out.q) {
      out.q = r;
      out.w = target;
    }
  }
  return out;
}

RankProfile rank_profile_mc(std::size_t n, std::uint64_t trials, const PrimeModulus& p, const Stream& rng,
                            unsigned workers) {
  if (trials == 0) throw DegenerateInput("rank_profile_mc needs at least one trial");
  if (n < 2) throw PreconditionViolated("rank profile needs n >= 2");
  require_dimension(2 * n - 1);
  RankProfile out;
  out.n = n;
  out.trials = trials;
  out.fieldPrime = p.value();
  std::mutex mu;
  const Stream joint_rng = rng.child("joint");
  parallel_for(trials, workers, [&](std::size_t begin, std::size_t end) {
    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> local;
    bool inter = true;
    for (std::size_t i = begin; i < end; ++i) {
      Stream t = joint_rng.child(static_cast<std::uint64_t>(i));
      const FpMatrix m = FpMatrix::from_signs(sample_symmetric(n, t), p);
      const std::size_t r = rank_mod_p(m, p);
      const std::size_t r1 = rank_mod_p(m.drop_first(), p);
      if (r1 + 2 < r) inter = false;
      ++local[{r, r1}];
    }
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& [key, c] : local) out.joint[key] += c;
    out.interlacing = out.interlacing && inter;
  });

  std::map<std::size_t, std::uint64_t> marginal;
  for (const auto& [key, c] : out.joint) marginal[key.first] += c;
  const double tt = static_cast<double>(trials);
  for (const auto& [k, c] : marginal) {
    if (k >= n) continue;
    RankProfile::Growth g;
    g.k = k;
    g.size = 2 * n - k - 1;
    g.left = static_cast<double>(c) / tt;
    const Stream size_rng = rng.child("growth").child(static_cast<std::uint64_t>(g.size));
    std::uint64_t hits = 0;
    parallel_for(trials, workers, [&](std::size_t begin, std::size_t end) {
      std::uint64_t h = 0;
      for (std::size_t i = begin; i < end; ++i) {
        Stream t = size_rng.child(static_cast<std::uint64_t>(i));
        if (rank_mod_p(FpMatrix::from_signs(sample_symmetric(g.size, t), p), p) + 1 == g.size) ++h;
      }
      std::lock_guard<std::mutex> lock(mu);
      hits += h;
    });
    g.right = static_cast<double>(hits) / tt;
    const double sigma = std::sqrt(g.left * (1 - g.left) / tt + 4 * g.right * (1 - g.right) / tt);
    g.violation = g.left - 2 * g.right > 4 * sigma + 1e-12;
    out.growth.push_back(g);
  }
  return out;
}

}  // namespace lolab
