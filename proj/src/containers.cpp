#include "lolab/containers.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "lolab/errors.hpp"

namespace lolab {

void require_scannable(const PrimeModulus& p) {
  if (p.value() > kScanLimit) {
    throw GuardExceeded("modulus " + std::to_string(p.value()) + " is too large for a full scan of Z_p");
  }
}

std::vector<u128> frequency_weights(const ZpVector& v) {
  const PrimeModulus& p = v.modulus();
  require_scannable(p);
  std::map<Residue, std::uint64_t> multiplicity;
  for (Residue r : v.entries()) {
    if (r != 0) ++multiplicity[r];
  }
  const std::uint64_t q = p.value();
  std::vector<u128> w(q, 0);
  for (const auto& [r, c] : multiplicity) {
    Residue kr = 0;
    for (std::uint64_t k = 0; k < q; ++k) {
      w[k] += static_cast<u128>(c) * term_weight(kr, p);
      kr += r;
      if (kr >= q) kr -= q;
    }
  }
  return w;
}

ResidueSet level_set_from_weights(const std::vector<u128>& weights, const Rational& t,
                                  const PrimeModulus& p) {
  const u128 ceiling = weight_ceiling(t, p);
  ResidueSet out;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= ceiling) out.push_back(k);
  }
  return out;
}

std::size_t level_set_size(const std::vector<u128>& weights, const Rational& t,
                           const PrimeModulus& p) {
  const u128 ceiling = weight_ceiling(t, p);
  return static_cast<std::size_t>(
      std::count_if(weights.begin(), weights.end(), [&](u128 w) { return w <= ceiling; }));
}

LevelSetQuery level_set(const ZpVector& v, const Rational& t) {
  return {t, level_set_from_weights(frequency_weights(v), t, v.modulus())};
}

ResidueSet frequency_set(const ZpVector& w) {
  return level_set_from_weights(frequency_weights(w), w.modulus().log_rational(), w.modulus());
}

namespace {

u128 container_sum(Residue a, const ResidueSet& s, const PrimeModulus& p) {
  u128 sum = 0;
  for (Residue k : s) sum += term_weight(p.mul(a, k), p);
  return sum;
}

bool container_test(u128 sum, std::size_t size, const PrimeModulus& p) {
  const u128 pp = static_cast<u128>(p.value()) * p.value();
  return 32 * sum <= static_cast<u128>(size) * pp;
}

}  // namespace

bool in_container(Residue a, const ResidueSet& frequencies, const PrimeModulus& p) {
  require_scannable(p);
  return container_test(container_sum(a, frequencies, p), frequencies.size(), p);
}

ContainerSet container(const ResidueSet& frequencies, const PrimeModulus& p) {
  require_scannable(p);
  ContainerSet c{frequencies, {}};
  for (Residue a = 0; a < p.value(); ++a) {
    if (container_test(container_sum(a, frequencies, p), frequencies.size(), p)) c.members.push_back(a);
  }
  return c;
}

bool container_size_holds(const ContainerSet& c, const PrimeModulus& p) {
  if (c.frequencies.empty()) return true;
  return static_cast<u128>(c.frequencies.size()) * c.members.size() <= static_cast<u128>(4) * p.value();
}

ContainmentCount lemma_contain_check(const ZpVector& v, const ResidueSet& S, const Rational& t) {
  const PrimeModulus& p = v.modulus();
  if (Rational(128) * t > Rational(static_cast<unsigned long>(v.size()))) {
    throw PreconditionViolated("threshold exceeds n/128");
  }
  const auto weights = frequency_weights(v);
  const u128 ceiling = weight_ceiling(t, p);
  for (Residue k : S) {
    if (k >= p.value() || weights[k] > ceiling) {
      throw PreconditionViolated("S is not contained in T_t(v): frequency " + std::to_string(k));
    }
  }
  const ContainerSet c = container(S, p);
  ContainmentCount out;
  for (Residue r : v.entries()) {
    if (!contains(c.members, r)) ++out.count;
  }
  out.holds = 4 * out.count <= v.size();
  return out;
}

ResidueSet gap_members(const GapSpec& gap, const PrimeModulus& p) {
  if (gap.steps.empty() || gap.steps.size() != gap.sizes.size()) {
    throw PreconditionViolated("a GAP needs d >= 1 steps with matching sizes");
  }
  ResidueSet cur{gap.base % p.value()};
  for (std::size_t i = 0; i < gap.steps.size(); ++i) {
    if (gap.sizes[i] == 0) throw PreconditionViolated("GAP sizes must be positive");
    ResidueSet next;
    const Residue step = gap.steps[i] % p.value();
    for (Residue x : cur) {
      Residue y = x;
      for (std::uint64_t j = 1; j <= gap.sizes[i]; ++j) {
        y = p.add(y, step);
        next.push_back(y);
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    cur = std::move(next);
  }
  return cur;
}

ZpVector gen_gap_vector(const GapSpec& gap, std::size_t n, const PrimeModulus& p, Stream& rng) {
  const ResidueSet q = gap_members(gap, p);
  std::vector<Residue> e(n);
  for (auto& x : e) x = q[rng.below(q.size())];
  return ZpVector(p, std::move(e));
}

}  // namespace lolab
