#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "lolab/errors.hpp"
#include "lolab/fibres.hpp"
#include "lolab/rng.hpp"

using namespace lolab;

namespace {

ZpVector constant(std::uint64_t p, std::size_t n, Residue c) {
  return ZpVector(PrimeModulus(p), std::vector<Residue>(n, c));
}

}  // namespace

TEST_CASE("kstar limit", "[fibre]") {
  REQUIRE(kstar_limit(1) == 1);
  REQUIRE(kstar_limit(1024) == 26);
  for (std::size_t n : {2, 3, 10, 100, 1000, 65536}) {
    const auto expect = static_cast<std::size_t>(std::ceil(std::log(n) / std::log(4.0 / 3.0) - 1e-12)) + 1;
    REQUIRE(kstar_limit(n) == expect);
  }
}

TEST_CASE("fibre threshold", "[fibre]") {
  const PrimeModulus p(101);
  const ConstantsProfile desk = ConstantsProfile::desk();
  // 4 sqrt(1024) = 128 and 32 log 101 is about 147.7.
  REQUIRE_FALSE(above_fibre_threshold(140, 1024, p, desk));
  REQUIRE(above_fibre_threshold(148, 1024, p, desk));
  REQUIRE_FALSE(above_fibre_threshold(1024, 1024, p, ConstantsProfile::paper()));
}

TEST_CASE("support below threshold gives an empty trace", "[fibre]") {
  const ConstantsProfile desk = ConstantsProfile::desk();
  std::vector<Residue> e(1024, 0);
  for (std::size_t i = 0; i < 100; ++i) e[i] = 3;
  const ZpVector v(PrimeModulus(101), e);
  Stream rng(1);
  const FibreTrace t = run_fibre(v, desk, rng);
  REQUIRE(t.kStar == 0);
  REQUIRE(t.steps.empty());
  REQUIRE(t.terminalZ.size() == 1024);
  REQUIRE(t.terminalSupport == 100);
  REQUIRE(audit_trace(v, t, desk).ok());

  const ZpVector zero = ZpVector::zeros(PrimeModulus(7), 0);
  const FibreTrace z = run_fibre(zero, desk, rng);
  REQUIRE(z.kStar == 0);
  REQUIRE(audit_trace(zero, z, desk).ok());
}

TEST_CASE("constant vector trace", "[fibre]") {
  const ConstantsProfile desk = ConstantsProfile::desk();
  const ZpVector v = constant(101, 1024, 7);
  Stream rng(11);
  const FibreTrace t = run_fibre(v, desk, rng);
  REQUIRE(t.kStar >= 1);
  REQUIRE(t.kStar <= kstar_limit(1024));
  REQUIRE(t.kStar == t.steps.size());
  REQUIRE(audit_trace(v, t, desk).ok());

  for (std::size_t k = 0; k < t.steps.size(); ++k) {
    const FibreStep& s = t.steps[k];
    REQUIRE(4 * s.X.size() >= s.Z.size());
    REQUIRE(disjoint(s.X, s.Y));
    REQUIRE(is_subset(s.X, s.Z));
    const double cap = std::pow(0.75, static_cast<double>(k)) * 1024;
    REQUIRE(static_cast<double>(s.Z.size()) <= cap + 1e-9);
    for (auto i : s.X) REQUIRE(contains(s.B.members, v[i]));
  }
  REQUIRE_FALSE(above_fibre_threshold(t.terminalSupport, 1024, v.modulus(), desk));

  Stream again(11);
  REQUIRE(fibre_key(run_fibre(v, desk, again)) == fibre_key(t));
}

TEST_CASE("audit catches mutations", "[fibre]") {
  const ConstantsProfile desk = ConstantsProfile::desk();
  const ZpVector v = constant(53, 1024, 1);
  Stream rng(3);
  const FibreTrace t = run_fibre(v, desk, rng);
  REQUIRE(t.kStar >= 1);

  FibreTrace m = t;
  m.kStar += 1;
  REQUIRE_FALSE(audit_trace(v, m, desk).ok());

  m = t;
  m.terminalZ.pop_back();
  REQUIRE_FALSE(audit_trace(v, m, desk).ok());

  m = t;
  m.steps.front().X.pop_back();
  REQUIRE_FALSE(audit_trace(v, m, desk).ok());

  m = t;
  auto& s = m.steps.front();
  const std::size_t i = s.X.front();
  s.X.erase(s.X.begin());
  s.Y.insert(std::lower_bound(s.Y.begin(), s.Y.end(), i), i);
  REQUIRE_FALSE(audit_trace(v, m, desk).ok());

  m = t;
  m.steps.front().B.members.clear();
  REQUIRE_FALSE(audit_trace(v, m, desk).ok());
}

TEST_CASE("fibre count bound", "[fibre]") {
  const ConstantsProfile desk = ConstantsProfile::desk();
  const PrimeModulus p(101);
  const FibreCountBound b = fibre_count_bound(1024, p, desk);
  REQUIRE(b.kMax == 26);
  REQUIRE(b.geometricSum == Catch::Approx(4096.0));
  REQUIRE(b.targetLog == Catch::Approx(16 * std::log(1024.0)));
  REQUIRE(b.logBound == Catch::Approx(b.kMax * b.containerChoicesLog + 2 * std::log(2.0) * b.geometricSum));
  REQUIRE_FALSE(b.withinTarget);

  // 2 log 2 * 4n already exceeds (n/64) log n for every n below e^{512 log 2}.
  const FibreCountBound big = fibre_count_bound(std::size_t{1} << 20, PrimeModulus(1009), ConstantsProfile::paper());
  REQUIRE(big.geometricSum == Catch::Approx(4.0 * (1 << 20)));
  REQUIRE_FALSE(big.withinTarget);
}
