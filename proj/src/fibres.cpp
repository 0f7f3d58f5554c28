#include "lolab/fibres.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lolab/errors.hpp"

namespace lolab {

namespace {

BigInt big(std::size_t x) { return BigInt(static_cast<unsigned long>(x)); }

std::size_t support_of(const ZpVector& v, const IndexSet& idx) {
  std::size_t s = 0;
  for (auto i : idx) s += v[i] != 0 ? 1 : 0;
  return s;
}

// Cap on the number of steps, far above kstar_limit for any feasible n.
constexpr std::size_t kStepCap = 4096;

}  // namespace

bool above_fibre_threshold(std::size_t s, std::size_t n, const PrimeModulus& p,
                           const ConstantsProfile& profile) {
  const Rational c = profile.supportThresholdCoeff;
  const Rational s2 = Rational(big(s) * big(s));
  if (s2 < c * c * Rational(big(n))) return false;
  return Rational(big(s)) >= profile.support_floor(p);
}

std::size_t kstar_limit(std::size_t n) {
  BigInt four = 1;
  BigInt three = big(n);
  std::size_t k = 0;
  while (four < three) {
    four *= 4;
    three *= 3;
    ++k;
  }
  return k + 1;
}

FibreTrace run_fibre(const ZpVector& v, const ConstantsProfile& profile, Stream& rng) {
  profile.validate();
  const PrimeModulus& p = v.modulus();
  FibreTrace trace;
  trace.p = p.value();
  trace.n = v.size();
  IndexSet z = full_index_set(v.size());
  if (above_fibre_threshold(v.support(), v.size(), p, profile)) {
    require_container_preconditions(v, profile);
  }
  while (above_fibre_threshold(support_of(v, z), v.size(), p, profile)) {
    if (trace.steps.size() >= kStepCap) throw RetryExhausted("fibre iteration did not terminate");
    const std::size_t k = trace.steps.size() + 1;
    const ZpVector vz = v.restrict(z);
    Stream step_rng = rng.child(static_cast<std::uint64_t>(k));
    ContainerCertificate cert;
    try {
      cert = build_container(vz, profile, step_rng);
    } catch (const RetryExhausted& e) {
      throw RetryExhausted("step " + std::to_string(k) + ": " + e.what());
    }
    FibreStep st;
    st.Z = z;
    for (auto i : cert.Y) st.Y.push_back(z[i]);
    for (auto i : cert.U) st.U.push_back(z[i]);
    st.B = std::move(cert.B);
    st.rounds = cert.rounds;
    for (auto i : set_minus(z, st.Y)) {
      if (contains(st.B.members, v[i])) st.X.push_back(i);
    }
    z = set_minus(z, st.X);
    trace.steps.push_back(std::move(st));
  }
  trace.kStar = trace.steps.size();
  trace.terminalZ = z;
  trace.terminalSupport = support_of(v, z);
  return trace;
}

CheckReport audit_trace(const ZpVector& v, const FibreTrace& trace, const ConstantsProfile& profile) {
  CheckReport r;
  const PrimeModulus& p = v.modulus();
  const std::size_t n = v.size();
  r.add("modulus", trace.p == p.value());
  r.add("length", trace.n == n);
  r.add("kStar_is_step_count", trace.kStar == trace.steps.size());

  auto in_range = [n](const IndexSet& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= n || (i > 0 && s[i - 1] >= s[i])) return false;
    }
    return true;
  };

  IndexSet expected_z = full_index_set(n);
  IndexSet seen_x;
  bool z_chain = true, x_recon = true, x_inside = true, y_inside = true, disjoint_x = true,
       disjoint_yx = true, leftover = true, x_quarter = true, zk_bound = true, above = true,
       b_recomputed = true, sets_valid = true;
  BigInt pow4 = 1, pow3 = 1;
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const FibreStep& st = trace.steps[k];
    if (!in_range(st.Z) || !in_range(st.X) || !in_range(st.Y) || !in_range(st.U)) {
      sets_valid = false;
      break;
    }
    if (st.Z != expected_z) z_chain = false;
    if (!is_subset(st.Y, st.Z)) y_inside = false;
    const IndexSet rest = set_minus(st.Z, st.Y);
    if (!is_subset(st.X, rest)) x_inside = false;
    IndexSet rebuilt;
    for (auto i : rest) {
      if (contains(st.B.members, v[i])) rebuilt.push_back(i);
    }
    if (rebuilt != st.X) x_recon = false;
    if (container(st.B.frequencies, p).members != st.B.members) b_recomputed = false;
    if (!disjoint(st.X, seen_x)) disjoint_x = false;
    if (!disjoint(st.Y, seen_x)) disjoint_yx = false;
    const std::size_t left = set_minus(rest, st.X).size();
    if (4 * left > st.Z.size()) leftover = false;
    if (4 * st.X.size() < st.Z.size()) x_quarter = false;
    // 4^{k-1} |Z_k| <= 3^{k-1} n
    if (pow4 * big(st.Z.size()) > pow3 * big(n)) zk_bound = false;
    if (!above_fibre_threshold(support_of(v, st.Z), n, p, profile)) above = false;
    seen_x = set_union(seen_x, st.X);
    expected_z = set_minus(st.Z, st.X);
    pow4 *= 4;
    pow3 *= 3;
  }
  r.add("index_sets_valid", sets_valid);
  r.add("Z_chain", sets_valid && z_chain && trace.terminalZ == expected_z);
  r.add("Y_inside_Z", y_inside);
  r.add("X_inside_Z_minus_Y", x_inside);
  r.add("X_reconstruction", x_recon);
  r.add("B_recomputed", b_recomputed);
  r.add("X_pairwise_disjoint", disjoint_x);
  r.add("Y_disjoint_from_earlier_X", disjoint_yx);
  r.add("leftover_at_most_quarter", leftover);
  r.add("X_at_least_quarter", x_quarter);
  r.add("Z_geometric_bound", zk_bound);
  r.add("steps_above_threshold", above);
  const std::size_t term_support = support_of(v, trace.terminalZ);
  r.add("terminal_support_matches", trace.terminalSupport == term_support);
  r.add("terminated_below_threshold", !above_fibre_threshold(term_support, n, p, profile));
  r.add("kStar_limit", trace.steps.size() <= kstar_limit(std::max<std::size_t>(n, 1)));
  return r;
}

FibreCountBound fibre_count_bound(std::size_t n, const PrimeModulus& p, const ConstantsProfile& profile) {
  FibreCountBound b;
  const double nn = static_cast<double>(n);
  const double lp = p.log_value();
  b.kMax = kstar_limit(std::max<std::size_t>(n, 1));
  b.containerChoicesLog = profile.mCoeff.get_d() * lp * lp;
  b.geometricSum = 4.0 * nn;
  b.logBound = static_cast<double>(b.kMax) * b.containerChoicesLog + 2.0 * std::log(2.0) * b.geometricSum;
  b.targetLog = n > 0 ? nn / 64.0 * std::log(nn) : 0.0;
  b.withinTarget = b.logBound <= b.targetLog;
  return b;
}

std::string fibre_key(const FibreTrace& trace) {
  std::ostringstream os;
  auto put = [&os](const auto& s) {
    os << '[';
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << ']';
  };
  for (const auto& st : trace.steps) {
    put(st.X);
    put(st.Y);
    put(st.B.members);
    os << ';';
  }
  return os.str();
}

}  // namespace lolab
