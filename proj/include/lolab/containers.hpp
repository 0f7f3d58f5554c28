#pragma once

// Level sets T_t(v), frequency sets F(w) and container sets C(S).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lolab/rng.hpp"
#include "lolab/zp_core.hpp"

namespace lolab {

/// Largest modulus accepted by operations that scan all of Z_p.
inline constexpr std::uint64_t kScanLimit = std::uint64_t{1} << 26U;

/// Throws GuardExceeded if p is above kScanLimit.
void require_scannable(const PrimeModulus& p);

/// W(k) = sum_i min(k v_i mod p, p - k v_i mod p)^2 for every k in Z_p.
/// Divide by p^2 to get sum_i ||k v_i / p||^2.
std::vector<u128> frequency_weights(const ZpVector& v);

struct LevelSetQuery {
  Rational threshold;
  ResidueSet members;
};

/// T_t(v) = {k : W(k) <= t p^2}, decided exactly.
LevelSetQuery level_set(const ZpVector& v, const Rational& t);
/// Same, from weights already computed by frequency_weights.
ResidueSet level_set_from_weights(const std::vector<u128>& weights, const Rational& t,
                                  const PrimeModulus& p);
/// |T_t| from precomputed weights.
std::size_t level_set_size(const std::vector<u128>& weights, const Rational& t,
                           const PrimeModulus& p);

/// F(w) = T_{log p}(w) with the frozen double log p.
ResidueSet frequency_set(const ZpVector& w);

struct ContainerSet {
  ResidueSet frequencies;  // S
  ResidueSet members;      // C(S)
};

/// C(S) = {a : 32 sum_{k in S} ||a k / p||^2 <= |S|}. C(empty) = Z_p.
ContainerSet container(const ResidueSet& frequencies, const PrimeModulus& p);
/// Single membership test against C(S).
bool in_container(Residue a, const ResidueSet& frequencies, const PrimeModulus& p);

/// |S| |C(S)| <= 4p, the container size bound. Vacuously true for S empty.
bool container_size_holds(const ContainerSet& c, const PrimeModulus& p);

struct ContainmentCount {
  std::size_t count = 0;  // #{i : v_i not in C(S)}
  bool holds = false;     // count <= n / 4
};

/// Counts coordinates of v outside C(S). Requires S to be a subset of T_t(v)
/// and t <= n/128; otherwise throws PreconditionViolated.
ContainmentCount lemma_contain_check(const ZpVector& v, const ResidueSet& S, const Rational& t);

/// Generalised arithmetic progression {a + j_1 l_1 + ... + j_d l_d : 1 <= j_i <= k_i}.
struct GapSpec {
  Residue base = 0;
  std::vector<Residue> steps;
  std::vector<std::uint64_t> sizes;
};

/// The distinct elements of the GAP, sorted.
ResidueSet gap_members(const GapSpec& gap, const PrimeModulus& p);
/// n entries drawn independently and uniformly from the GAP.
ZpVector gen_gap_vector(const GapSpec& gap, std::size_t n, const PrimeModulus& p, Stream& rng);

}  // namespace lolab
