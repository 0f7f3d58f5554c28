#pragma once

// Random symmetric sign matrices: exact determinants, ranks over F_p,
// exhaustive tiny-n probabilities and Monte Carlo singularity estimates.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "lolab/inverse_lo.hpp"
#include "lolab/rng.hpp"
#include "lolab/zp_core.hpp"

namespace lolab {

/// Symmetric matrix with entries in {-1, +1}, upper triangle packed row by row.
/// A set bit stores -1.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t n);

  /// The matrix whose packed bits are the low n(n+1)/2 bits of `code`.
  static SymMatrix from_code(std::size_t n, std::uint64_t code);

  std::size_t size() const noexcept { return n_; }
  static std::size_t free_entries(std::size_t n) noexcept { return n * (n + 1) / 2; }

  int at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, int sign);

  /// Removes the first row and column.
  SymMatrix drop_first() const;

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::size_t slot(std::size_t i, std::size_t j) const;

  std::size_t n_;
  std::vector<std::uint64_t> bits_;
};

SymMatrix sample_symmetric(std::size_t n, Stream& rng);

/// Dense matrix over F_p, row-major, canonical residues.
struct FpMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Residue> a;

  FpMatrix() = default;
  FpMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

  Residue& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  Residue operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static FpMatrix from_signs(const SymMatrix& m, const PrimeModulus& p);
  bool is_symmetric() const;
  /// Removes the first row and column.
  FpMatrix drop_first() const;

  friend bool operator==(const FpMatrix&, const FpMatrix&) = default;
};

FpMatrix multiply(const FpMatrix& x, const FpMatrix& y, const PrimeModulus& p);
std::size_t rank_mod_p(FpMatrix m, const PrimeModulus& p);
Residue det_mod_p(FpMatrix m, const PrimeModulus& p);
/// Throws SingularMatrix.
FpMatrix inverse_mod_p(const FpMatrix& m, const PrimeModulus& p);
/// Transposed cofactor matrix.
FpMatrix adjugate(const FpMatrix& m, const PrimeModulus& p);

/// Largest dimension accepted by det_exact and the Monte Carlo routines.
inline constexpr std::size_t kMaxDimension = 64;

/// Exact integer determinant by CRT over 61-bit primes. Throws GuardExceeded for n > 64.
BigInt det_exact(const SymMatrix& m);
bool is_singular(const SymMatrix& m);

/// Pr(det M_n = 0) by enumerating every symmetric sign matrix. Requires n <= 6.
Rational singularity_exact(std::size_t n);

struct SingularityEstimate {
  std::size_t n = 0;
  std::uint64_t trials = 0;
  std::uint64_t singularCount = 0;
  std::uint64_t fieldPrime = 0;
  std::uint64_t fieldSingularCount = 0;  // det = 0 over F_p
  double pointEstimate = 0;
  double wilsonLo = 0;
  double wilsonHi = 0;
  double conjectureValue = 0;  // n^2 2^{1-n}
  double paperShape = 0;       // exp(-2^-15 sqrt(n))
};

/// Wilson score interval at 95%.
std::pair<double, double> wilson95(std::uint64_t successes, std::uint64_t trials);

/// Monte Carlo singularity estimate. Trial i uses rng.child(i), so the result
/// does not depend on `workers`. Throws DegenerateInput for zero trials.
SingularityEstimate singularity_mc(std::size_t n, std::uint64_t trials, const Stream& rng,
                                   unsigned workers = 1, std::uint64_t fieldPrime = 5);

/// Pr(M_n v = w over F_p), exactly, for n <= 4.
Rational match_probability_exact(const ZpVector& v, const ZpVector& w);

struct BlockProbability {
  Rational probability;  // Pr(M_{X x [n]} v = w_X)
  Rational bound;        // rho(v_Y)^{|X|}
  bool holds = false;
};

/// Requires X and Y disjoint and n <= 4.
BlockProbability block_probability_exact(const ZpVector& v, const ZpVector& w, const IndexSet& X,
                                         const IndexSet& Y);

struct OdlyzkoResult {
  std::uint64_t count = 0;  // sign vectors in the span
  bool holds = false;       // count <= 2^k
};

/// Counts {-1,1}^n inside the span of `basis`. Requires n <= 14 and an
/// independent basis (DependentBasis otherwise).
OdlyzkoResult odlyzko_check(const std::vector<std::vector<Residue>>& basis, std::size_t n,
                            const PrimeModulus& p);

/// Takes M_n and works with M_{n-1} (first row and column removed), which
/// must have rank n - 2. Checks M_{n-1} adj = 0, rank adj = 1, the factorisation
/// c_ij = lambda a_i a_j, the cofactor expansion of det M_n and the linear
/// relation on the first row when det M_n = 0.
CheckReport adjugate_rank1_check(const FpMatrix& m, const PrimeModulus& p);

/// Checks f(X,Y) - f(X',Y) - f(X,Y') + f(X',Y') = 2 z_I . w_I with f(u) = u^T M^{-1} u,
/// w = u - u' and z = M^{-1} w*_J. I and J must partition [0, m).
bool decoupling_identity_check(const FpMatrix& m, const std::vector<int>& u, const std::vector<int>& u2,
                               const IndexSet& I, const IndexSet& J, const PrimeModulus& p);

struct DecouplingResult {
  Rational single;    // Pr(E)
  Rational fourfold;  // Pr(E(X,Y) E(X',Y) E(X,Y') E(X',Y'))
  bool holds = false; // single^4 <= fourfold
};

/// Exact check of the fourth-moment decoupling inequality for independent X, Y
/// with the given laws. event[x][y] says whether E holds. Supports up to 16 atoms.
DecouplingResult decoupling_probability_check(const std::vector<Rational>& lawX,
                                              const std::vector<Rational>& lawY,
                                              const std::vector<std::vector<bool>>& event);

struct QResult {
  Rational q;
  std::vector<Residue> w;
};

/// Pr(exists v != 0 with M_n v = w and rho(v) >= beta) over F_p. With
/// maximise, w is ignored and the maximum over all w is returned with its
/// smallest maximiser. strict rejects beta < 4/p. Guard: p^n 2^{n(n+1)/2} <= 10^8
/// (times p^n when maximising).
QResult q_exact(std::size_t n, const PrimeModulus& p, const Rational& beta, const std::vector<Residue>& w,
                bool maximise = false, bool strict = false);

struct RankProfile {
  std::size_t n = 0;
  std::uint64_t trials = 0;
  std::uint64_t fieldPrime = 0;
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> joint;  // (rk M_n, rk M_{n-1}) -> count
  bool interlacing = true;  // rk M_{n-1} >= rk M_n - 2 in every trial
  struct Growth {
    std::size_t k = 0;
    std::size_t size = 0;        // 2n - k - 1
    double left = 0;             // Pr(rk M_n = k)
    double right = 0;            // Pr(rk M_size = size - 1)
    bool violation = false;      // left - 2 right beyond 4 sigma
  };
  std::vector<Growth> growth;
};

RankProfile rank_profile_mc(std::size_t n, std::uint64_t trials, const PrimeModulus& p, const Stream& rng,
                            unsigned workers = 1);

}  // namespace lolab
