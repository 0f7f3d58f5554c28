#include "lolab/canonical_json.hpp"

#include <regex>

#include "lolab/errors.hpp"

namespace lolab {

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

Json json_int(std::uint64_t x) { return std::to_string(x); }

Json json_int(const BigInt& x) { return x.get_str(); }

Json json_rational(const Rational& x) {
  Rational c(x);
  c.canonicalize();
  return c.get_str();
}

Json json_indices(const std::vector<std::size_t>& s) {
  Json a = Json::array();
  for (auto i : s) a.push_back(std::to_string(i));
  return a;
}

Json json_residues(const std::vector<Residue>& s) {
  Json a = Json::array();
  for (auto i : s) a.push_back(std::to_string(i));
  return a;
}

Json to_json(const RhoResult& r) {
  Json j;
  j["atom"] = std::to_string(r.atom);
  j["count"] = json_int(r.count);
  j["log2Denominator"] = json_int(static_cast<std::uint64_t>(r.log2_denominator));
  j["value"] = json_rational(r.value());
  return j;
}

Json to_json(const ContainerSet& c) {
  Json j;
  j["frequencies"] = json_residues(c.frequencies);
  j["members"] = json_residues(c.members);
  return j;
}

Json to_json(const ContainerCertificate& c) {
  Json j;
  j["p"] = json_int(c.p);
  j["n"] = json_int(static_cast<std::uint64_t>(c.n));
  j["profile"] = c.profile;
  j["Y"] = json_indices(c.Y);
  j["U"] = json_indices(c.U);
  j["B"] = to_json(c.B);
  Json m;
  m["sizeY"] = json_int(static_cast<std::uint64_t>(c.sizeY));
  m["supportV"] = json_int(static_cast<std::uint64_t>(c.supportV));
  m["supportVY"] = json_int(static_cast<std::uint64_t>(c.supportVY));
  m["outsideCount"] = json_int(static_cast<std::uint64_t>(c.outsideCount));
  m["sizeB"] = json_int(static_cast<std::uint64_t>(c.sizeB));
  m["rhoVY"] = to_json(c.rhoVY);
  m["m"] = json_int(c.m);
  m["ell"] = json_rational(c.ell);
  m["t"] = json_rational(c.t);
  m["levelEllVY"] = json_int(static_cast<std::uint64_t>(c.levelEllVY));
  m["level8EllV"] = json_int(static_cast<std::uint64_t>(c.level8EllV));
  m["frequencyCount"] = json_int(static_cast<std::uint64_t>(c.frequencyCount));
  j["measured"] = m;
  Json a;
  a["y"] = json_int(c.yAttempts);
  a["u"] = json_int(c.uAttempts);
  a["rounds"] = json_int(c.rounds);
  j["attempts"] = a;
  return j;
}

Json to_json(const FibreTrace& t) {
  Json j;
  j["p"] = json_int(t.p);
  j["n"] = json_int(static_cast<std::uint64_t>(t.n));
  j["kStar"] = json_int(static_cast<std::uint64_t>(t.kStar));
  j["terminalZ"] = json_indices(t.terminalZ);
  j["terminalSupport"] = json_int(static_cast<std::uint64_t>(t.terminalSupport));
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json st;
    st["Z"] = json_indices(s.Z);
    st["X"] = json_indices(s.X);
    st["Y"] = json_indices(s.Y);
    st["U"] = json_indices(s.U);
    st["B"] = to_json(s.B);
    st["rounds"] = json_int(s.rounds);
    steps.push_back(st);
  }
  j["steps"] = steps;
  return j;
}

Json to_json(const CheckReport& r) {
  Json j = Json::object();
  for (const auto& c : r.checks) j[c.name] = c.ok;
  return j;
}

Json to_json(const SingularityEstimate& e) {
  Json j;
  j["n"] = json_int(static_cast<std::uint64_t>(e.n));
  j["trials"] = json_int(e.trials);
  j["singularCount"] = json_int(e.singularCount);
  j["fieldPrime"] = json_int(e.fieldPrime);
  j["fieldSingularCount"] = json_int(e.fieldSingularCount);
  j["pointEstimate"] = e.pointEstimate;
  j["wilsonLo"] = e.wilsonLo;
  j["wilsonHi"] = e.wilsonHi;
  j["conjectureValue"] = e.conjectureValue;
  j["paperShape"] = e.paperShape;
  return j;
}

Json to_json(const RankProfile& r) {
  Json j;
  j["n"] = json_int(static_cast<std::uint64_t>(r.n));
  j["trials"] = json_int(r.trials);
  j["fieldPrime"] = json_int(r.fieldPrime);
  j["interlacing"] = r.interlacing;
  Json joint = Json::array();
  for (const auto& [key, c] : r.joint) {
    joint.push_back({{"rankN", json_int(static_cast<std::uint64_t>(key.first))},
                     {"rankNMinus1", json_int(static_cast<std::uint64_t>(key.second))},
                     {"count", json_int(c)}});
  }
  j["joint"] = joint;
  Json growth = Json::array();
  for (const auto& g : r.growth) {
    growth.push_back({{"k", json_int(static_cast<std::uint64_t>(g.k))},
                      {"size", json_int(static_cast<std::uint64_t>(g.size))},
                      {"left", g.left},
                      {"right", g.right},
                      {"violation", g.violation}});
  }
  j["growth"] = growth;
  return j;
}

Rational parse_rational(const std::string& s) {
  static const std::regex re(R"(\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw ParseError(0, "not a rational: '" + s + "'");
  BigInt num(m[1].str());
  BigInt den = m[2].matched ? BigInt(m[2].str()) : BigInt(1);
  if (den == 0) throw ParseError(0, "zero denominator in '" + s + "'");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace lolab
