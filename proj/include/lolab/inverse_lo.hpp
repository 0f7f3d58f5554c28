#pragma once

// Randomised container construction with verifiable certificates.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lolab/anticoncentration.hpp"
#include "lolab/containers.hpp"
#include "lolab/rng.hpp"
#include "lolab/zp_core.hpp"

namespace lolab {

struct ConstantsProfile {
  std::string name;
  Rational supportFloorCoeff;      // |v| >= supportFloorCoeff * log p
  Rational mCoeff;                 // m = floor(mCoeff * log p)
  Rational ellCoeff;               // ell = ellCoeff * |v|
  Rational tCoeff;                 // t = tCoeff * n
  Rational sizeConst;              // |B| rho(v_Y) sqrt|v| <= sizeConst
  Rational yDensity;               // Y is a yDensity-random subset
  Rational uDensityCoeff;          // U is a (uDensityCoeff * m / n)-random subset
  Rational rhoFloorCoeff;          // rho(v) >= rhoFloorCoeff / p
  Rational supportThresholdCoeff;  // fibre steps run while |v_Z| >= coeff * sqrt(n)
  std::uint64_t maxAttempts = 1000;

  static ConstantsProfile paper();
  static ConstantsProfile desk();

  /// Throws PreconditionViolated unless every coefficient is positive and
  /// both densities are at most 1.
  void validate() const;

  /// supportFloorCoeff * log p with the frozen log.
  Rational support_floor(const PrimeModulus& p) const;
  std::uint64_t m(const PrimeModulus& p) const;
  Rational ell(std::size_t support) const;
  Rational t(std::size_t n) const;
  /// min(1, uDensityCoeff * m / n).
  Rational u_density(std::size_t n, const PrimeModulus& p) const;

  friend bool operator==(const ConstantsProfile&, const ConstantsProfile&) = default;
};

/// True with probability q (0 <= q <= 1), exactly when q has a 64-bit denominator.
bool bernoulli(Stream& rng, const Rational& q);

/// Independent q-random subset of [0, n).
IndexSet random_subset(std::size_t n, const Rational& q, Stream& rng);

struct SampleResult {
  IndexSet set;
  std::uint64_t attempts = 0;
};

/// Rejection-samples Y with n/4 <= |Y| <= n/2, |v_Y| >= |v|/4 and
/// T_ell(v_Y) a subset of T_{8 ell}(v). Throws RetryExhausted.
SampleResult sample_Y(const ZpVector& v, const ConstantsProfile& profile, Stream& rng);
/// Rejection-samples U with |U| <= m, |T_{8 ell}(v)| <= 2|F(v_U)| and
/// F(v_U) a subset of T_t(v). Throws RetryExhausted.
SampleResult sample_U(const ZpVector& v, const ConstantsProfile& profile, Stream& rng);

struct ContainerCertificate {
  std::uint64_t p = 0;
  std::size_t n = 0;
  std::string profile;
  IndexSet Y;
  IndexSet U;
  ContainerSet B;

  // Measured quantities.
  std::size_t sizeY = 0;
  std::size_t supportV = 0;
  std::size_t supportVY = 0;
  std::size_t outsideCount = 0;
  std::size_t sizeB = 0;
  RhoResult rhoVY;
  std::uint64_t m = 0;
  Rational ell;
  Rational t;
  std::size_t levelEllVY = 0;    // |T_ell(v_Y)|
  std::size_t level8EllV = 0;    // |T_{8 ell}(v)|
  std::size_t frequencyCount = 0;  // |F(v_U)|

  std::uint64_t yAttempts = 0;
  std::uint64_t uAttempts = 0;
  std::uint64_t rounds = 0;  // full Y/U redraws until every invariant held
};

struct Check {
  std::string name;
  bool ok = true;
  std::string detail;
};

struct CheckReport {
  std::vector<Check> checks;

  bool ok() const;
  void add(std::string name, bool ok, std::string detail = {});
  /// Names of the failed checks.
  std::vector<std::string> failures() const;
};

/// Throws PreconditionViolated unless |v| >= support floor and rho(v) >= rhoFloorCoeff / p.
void require_container_preconditions(const ZpVector& v, const ConstantsProfile& profile);

/// Builds (Y, U, B) and retries whole rounds until every certificate invariant
/// holds. Throws PreconditionViolated or RetryExhausted.
ContainerCertificate build_container(const ZpVector& v, const ConstantsProfile& profile, Stream& rng);

/// Recomputes every measured quantity of the certificate from (v, Y, U, B)
/// and checks each invariant.
CheckReport verify_certificate(const ZpVector& v, const ContainerCertificate& cert,
                               const ConstantsProfile& profile);

/// Checks rho(v_Y) <= 2^13 |T_ell(v_Y)| / (p sqrt|v|) with ell = 2^-16 |v|, exactly.
/// Only meaningful when rho(v) >= 4/p, |v| >= 2^18 log p and |v_Y| >= |v|/4.
bool halasz_application_holds(const ZpVector& v, const IndexSet& Y);
/// Whether the preconditions of halasz_application_holds are met.
bool halasz_application_applies(const ZpVector& v, const IndexSet& Y);

}  // namespace lolab
