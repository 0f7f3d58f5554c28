#include "lolab/inverse_lo.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "lolab/errors.hpp"

namespace lolab {

namespace {

Rational pow2(int e) {
  Rational r(1);
  if (e >= 0) {
    r = Rational(BigInt(1) << e);
  } else {
    r = Rational(BigInt(1), BigInt(1) << -e);
  }
  r.canonicalize();
  return r;
}

Rational ratio(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

BigInt floor_of(const Rational& x) {
  BigInt f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return f;
}

Rational as_rational(std::size_t x) { return Rational(BigInt(static_cast<unsigned long>(x))); }

}  // namespace

ConstantsProfile ConstantsProfile::paper() {
  ConstantsProfile c;
  c.name = "paper";
  c.supportFloorCoeff = pow2(18);
  c.mCoeff = pow2(12);
  c.ellCoeff = pow2(-16);
  c.tCoeff = pow2(-7);
  c.sizeConst = pow2(16);
  c.yDensity = ratio(3, 8);
  c.uDensityCoeff = ratio(1, 2);
  c.rhoFloorCoeff = 4;
  c.supportThresholdCoeff = pow2(8);
  c.maxAttempts = 1000;
  return c;
}

ConstantsProfile ConstantsProfile::desk() {
  ConstantsProfile c;
  c.name = "desk";
  c.supportFloorCoeff = 32;
  c.mCoeff = 64;
  c.ellCoeff = pow2(-10);
  c.tCoeff = pow2(-5);
  c.sizeConst = pow2(16);
  c.yDensity = ratio(3, 8);
  c.uDensityCoeff = ratio(1, 2);
  c.rhoFloorCoeff = 1;
  c.supportThresholdCoeff = 4;
  c.maxAttempts = 1000;
  return c;
}

void ConstantsProfile::validate() const {
  const std::pair<const char*, const Rational*> fields[] = {
      {"supportFloorCoeff", &supportFloorCoeff}, {"mCoeff", &mCoeff},
      {"ellCoeff", &ellCoeff},                   {"tCoeff", &tCoeff},
      {"sizeConst", &sizeConst},                 {"yDensity", &yDensity},
      {"uDensityCoeff", &uDensityCoeff},         {"rhoFloorCoeff", &rhoFloorCoeff},
      {"supportThresholdCoeff", &supportThresholdCoeff}};
  for (const auto& [name, value] : fields) {
    if (sgn(*value) <= 0) throw PreconditionViolated(std::string(name) + " must be positive");
  }
  if (yDensity > 1) throw PreconditionViolated("yDensity must be at most 1");
  if (maxAttempts == 0) throw PreconditionViolated("maxAttempts must be positive");
}

Rational ConstantsProfile::support_floor(const PrimeModulus& p) const {
  return supportFloorCoeff * p.log_rational();
}

std::uint64_t ConstantsProfile::m(const PrimeModulus& p) const {
  const BigInt f = floor_of(mCoeff * p.log_rational());
  return f.fits_ulong_p() ? f.get_ui() : std::numeric_limits<std::uint64_t>::max();
}

Rational ConstantsProfile::ell(std::size_t support) const { return ellCoeff * as_rational(support); }

Rational ConstantsProfile::t(std::size_t n) const { return tCoeff * as_rational(n); }

Rational ConstantsProfile::u_density(std::size_t n, const PrimeModulus& p) const {
  if (n == 0) return 1;
  Rational q = uDensityCoeff * Rational(BigInt(static_cast<unsigned long>(m(p)))) / as_rational(n);
  q.canonicalize();
  return q > 1 ? Rational(1) : q;
}

bool bernoulli(Stream& rng, const Rational& q) {
  if (sgn(q) <= 0) return false;
  if (q >= 1) return true;
  if (q.get_den().fits_ulong_p()) {
    return rng.bernoulli(q.get_num().get_ui(), q.get_den().get_ui());
  }
  return rng.unit() < q.get_d();
}

IndexSet random_subset(std::size_t n, const Rational& q, Stream& rng) {
  IndexSet s;
  for (std::size_t i = 0; i < n; ++i) {
    if (bernoulli(rng, q)) s.push_back(i);
  }
  return s;
}

namespace {

std::size_t support_of(const ZpVector& v, const IndexSet& idx) {
  std::size_t s = 0;
  for (auto i : idx) s += v[i] != 0 ? 1 : 0;
  return s;
}

bool y_size_ok(std::size_t y, std::size_t n) { return 4 * y >= n && 2 * y <= n; }

bool y_level_ok(const std::vector<u128>& wv, const ZpVector& vy, const Rational& ell) {
  const PrimeModulus& p = vy.modulus();
  const auto wy = frequency_weights(vy);
  const u128 small = weight_ceiling(ell, p);
  const u128 big = weight_ceiling(8 * ell, p);
  for (std::size_t k = 0; k < wy.size(); ++k) {
    if (wy[k] <= small && wv[k] > big) return false;
  }
  return true;
}

struct UMeasure {
  bool ok = false;
  std::size_t frequencyCount = 0;
  std::size_t level8 = 0;
};

UMeasure u_measure(const std::vector<u128>& wv, const ZpVector& v, const IndexSet& U,
                   const ConstantsProfile& profile) {
  const PrimeModulus& p = v.modulus();
  UMeasure out;
  const Rational ell = profile.ell(v.support());
  out.level8 = level_set_size(wv, 8 * ell, p);
  const ResidueSet f = frequency_set(v.restrict(U));
  out.frequencyCount = f.size();
  const u128 tc = weight_ceiling(profile.t(v.size()), p);
  bool inside = true;
  for (Residue k : f) {
    if (wv[k] > tc) {
      inside = false;
      break;
    }
  }
  out.ok = U.size() <= profile.m(p) && out.level8 <= 2 * out.frequencyCount && inside;
  return out;
}

}  // namespace

SampleResult sample_Y(const ZpVector& v, const ConstantsProfile& profile, Stream& rng) {
  const auto wv = frequency_weights(v);
  const Rational ell = profile.ell(v.support());
  for (std::uint64_t a = 1; a <= profile.maxAttempts; ++a) {
    IndexSet y = random_subset(v.size(), profile.yDensity, rng);
    if (!y_size_ok(y.size(), v.size())) continue;
    if (4 * support_of(v, y) < v.support()) continue;
    if (!y_level_ok(wv, v.restrict(y), ell)) continue;
    return {std::move(y), a};
  }
  throw RetryExhausted("no acceptable Y within " + std::to_string(profile.maxAttempts) + " attempts");
}

SampleResult sample_U(const ZpVector& v, const ConstantsProfile& profile, Stream& rng) {
  const auto wv = frequency_weights(v);
  const Rational q = profile.u_density(v.size(), v.modulus());
  for (std::uint64_t a = 1; a <= profile.maxAttempts; ++a) {
    IndexSet u = random_subset(v.size(), q, rng);
    if (u_measure(wv, v, u, profile).ok) return {std::move(u), a};
  }
  throw RetryExhausted("no acceptable U within " + std::to_string(profile.maxAttempts) + " attempts");
}

void require_container_preconditions(const ZpVector& v, const ConstantsProfile& profile) {
  const PrimeModulus& p = v.modulus();
  if (as_rational(v.support()) < profile.support_floor(p)) {
    throw PreconditionViolated("support " + std::to_string(v.support()) + " is below the floor " +
                               profile.support_floor(p).get_str());
  }
  const RhoResult r = rho(v);
  // count / 2^d >= c / p  <=>  count * p >= c * 2^d
  const Rational lhs(r.count * static_cast<unsigned long>(p.value()));
  if (lhs < profile.rhoFloorCoeff * Rational(BigInt(1) << r.log2_denominator)) {
    throw PreconditionViolated("rho(v) is below rhoFloorCoeff / p");
  }
}

namespace {

void measure(const ZpVector& v, ContainerCertificate& c, const ConstantsProfile& profile) {
  const PrimeModulus& p = v.modulus();
  const ZpVector vy = v.restrict(c.Y);
  c.p = p.value();
  c.n = v.size();
  c.profile = profile.name;
  c.sizeY = c.Y.size();
  c.supportV = v.support();
  c.supportVY = vy.support();
  c.sizeB = c.B.members.size();
  c.outsideCount = 0;
  for (Residue r : v.entries()) c.outsideCount += contains(c.B.members, r) ? 0 : 1;
  c.rhoVY = rho(vy);
  c.m = profile.m(p);
  c.ell = profile.ell(v.support());
  c.t = profile.t(v.size());
  c.levelEllVY = level_set_size(frequency_weights(vy), c.ell, p);
  c.level8EllV = level_set_size(frequency_weights(v), 8 * c.ell, p);
  c.frequencyCount = c.B.frequencies.size();
}

}  // namespace

ContainerCertificate build_container(const ZpVector& v, const ConstantsProfile& profile, Stream& rng) {
  profile.validate();
  require_container_preconditions(v, profile);
  std::map<std::string, std::uint64_t> failed;
  for (std::uint64_t round = 1; round <= profile.maxAttempts; ++round) {
    ContainerCertificate c;
    SampleResult y = sample_Y(v, profile, rng);
    SampleResult u = sample_U(v, profile, rng);
    c.Y = std::move(y.set);
    c.U = std::move(u.set);
    c.yAttempts = y.attempts;
    c.uAttempts = u.attempts;
    c.rounds = round;
    c.B = container(frequency_set(v.restrict(c.U)), v.modulus());
    measure(v, c, profile);
    const CheckReport rep = verify_certificate(v, c, profile);
    if (rep.ok()) return c;
    for (const auto& f : rep.failures()) ++failed[f];
  }
  std::string why;
  for (const auto& [name, count] : failed) why += " " + name + "=" + std::to_string(count);
  throw RetryExhausted("no certificate passed within " + std::to_string(profile.maxAttempts) +
                       " rounds; failed checks:" + why);
}

bool CheckReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

void CheckReport::add(std::string name, bool ok, std::string detail) {
  checks.push_back({std::move(name), ok, std::move(detail)});
}

std::vector<std::string> CheckReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.ok) out.push_back(c.name);
  }
  return out;
}

namespace {

bool valid_index_set(const IndexSet& s, std::size_t n) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= n || (i > 0 && s[i - 1] >= s[i])) return false;
  }
  return true;
}

BigInt big(std::size_t x) { return BigInt(static_cast<unsigned long>(x)); }

}  // namespace

CheckReport verify_certificate(const ZpVector& v, const ContainerCertificate& cert,
                               const ConstantsProfile& profile) {
  CheckReport r;
  const PrimeModulus& p = v.modulus();
  const std::size_t n = v.size();

  r.add("modulus", cert.p == p.value());
  r.add("length", cert.n == n);
  const bool y_valid = valid_index_set(cert.Y, n);
  const bool u_valid = valid_index_set(cert.U, n);
  r.add("Y_is_index_set", y_valid);
  r.add("U_is_index_set", u_valid);
  if (!y_valid || !u_valid) return r;

  const ZpVector vy = v.restrict(cert.Y);
  const ZpVector vu = v.restrict(cert.U);
  const auto wv = frequency_weights(v);
  const auto wy = frequency_weights(vy);
  const Rational ell = profile.ell(v.support());
  const Rational t = profile.t(n);
  const std::uint64_t m = profile.m(p);

  // Y properties.
  r.add("sizeY_matches", cert.sizeY == cert.Y.size());
  r.add("Y_size_window", y_size_ok(cert.Y.size(), n));
  r.add("supportV_matches", cert.supportV == v.support());
  r.add("supportVY_matches", cert.supportVY == vy.support());
  r.add("Y_support_quarter", 4 * vy.support() >= v.support());
  r.add("Y_level_containment", y_level_ok(wv, vy, ell));

  // U properties.
  const ResidueSet f = frequency_set(vu);
  const u128 tc = weight_ceiling(t, p);
  const std::size_t level8 = level_set_size(wv, 8 * ell, p);
  r.add("U_size_at_most_m", cert.U.size() <= m);
  r.add("frequencies_inside_T_t",
        std::all_of(f.begin(), f.end(), [&](Residue k) { return wv[k] <= tc; }));
  r.add("T_8ell_at_most_twice_F", level8 <= 2 * f.size());

  // B is recomputed from U.
  const ContainerSet b = container(f, p);
  r.add("B_frequencies_recomputed", cert.B.frequencies == f);
  r.add("B_members_recomputed", cert.B.members == b.members);
  r.add("sizeB_matches", cert.sizeB == b.members.size());

  std::size_t outside = 0;
  for (Residue x : v.entries()) outside += contains(b.members, x) ? 0 : 1;
  r.add("outsideCount_matches", cert.outsideCount == outside);
  r.add("outside_at_most_quarter", 4 * outside <= n);

  // |B| rho(v_Y) sqrt|v| <= sizeConst, squared: (|B| c b)^2 |v| <= (a 2^d)^2.
  const RhoResult ry = rho(vy);
  r.add("rhoVY_matches", ry.count == cert.rhoVY.count && ry.log2_denominator == cert.rhoVY.log2_denominator &&
                             ry.atom == cert.rhoVY.atom);
  {
    const BigInt lhs_root = big(b.members.size()) * ry.count * profile.sizeConst.get_den();
    const BigInt rhs_root = profile.sizeConst.get_num() << ry.log2_denominator;
    r.add("size_bound", lhs_root * lhs_root * big(v.support()) <= rhs_root * rhs_root);
  }

  // Proof chain.
  const std::size_t level_y = level_set_size(wy, ell, p);
  r.add("chain_B_at_most_4p_over_F", f.empty() || big(b.members.size()) * big(f.size()) <= 4 * big(p.value()));
  r.add("chain_T_ell_vY_at_most_T_8ell_v", level_y <= level8);
  r.add("chain_T_8ell_v_at_most_2F", level8 <= 2 * f.size());
  r.add("measured_levels_match",
        cert.levelEllVY == level_y && cert.level8EllV == level8 && cert.frequencyCount == f.size() && cert.m == m &&
            cert.ell == ell && cert.t == t);

  if (halasz_application_applies(v, cert.Y)) {
    r.add("halasz_application", halasz_application_holds(v, cert.Y));
  }
  return r;
}

bool halasz_application_applies(const ZpVector& v, const IndexSet& Y) {
  const PrimeModulus& p = v.modulus();
  const ConstantsProfile paper = ConstantsProfile::paper();
  if (as_rational(v.support()) < paper.support_floor(p)) return false;
  if (4 * support_of(v, Y) < v.support()) return false;
  const RhoResult r = rho(v);
  return r.count * static_cast<unsigned long>(p.value()) >= BigInt(4) << r.log2_denominator;
}

bool halasz_application_holds(const ZpVector& v, const IndexSet& Y) {
  const PrimeModulus& p = v.modulus();
  const ZpVector vy = v.restrict(Y);
  const RhoResult ry = rho(vy);
  const Rational ell = ConstantsProfile::paper().ell(v.support());
  const std::size_t level = level_set_size(frequency_weights(vy), ell, p);
  // c p sqrt|v| <= 2^13 |T| 2^d, squared.
  const BigInt lhs = ry.count * static_cast<unsigned long>(p.value());
  const BigInt rhs = (big(level) << 13) << ry.log2_denominator;
  return lhs * lhs * big(v.support()) <= rhs * rhs;
}

}  // namespace lolab
