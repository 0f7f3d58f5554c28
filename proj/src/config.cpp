#include "lolab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/sha.h>

#include "lolab/errors.hpp"

namespace lolab {

namespace {

struct Field {
  const char* key;
  Rational ConstantsProfile::*member;
};

constexpr Field kFields[] = {
    {"supportFloorCoeff", &ConstantsProfile::supportFloorCoeff},
    {"mCoeff", &ConstantsProfile::mCoeff},
    {"ellCoeff", &ConstantsProfile::ellCoeff},
    {"tCoeff", &ConstantsProfile::tCoeff},
    {"sizeConst", &ConstantsProfile::sizeConst},
    {"yDensity", &ConstantsProfile::yDensity},
    {"uDensityCoeff", &ConstantsProfile::uDensityCoeff},
    {"rhoFloorCoeff", &ConstantsProfile::rhoFloorCoeff},
    {"supportThresholdCoeff", &ConstantsProfile::supportThresholdCoeff},
};

std::string as_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  throw ParseError(0, "profile values must be strings or integers");
}

}  // namespace

Json profile_to_json(const ConstantsProfile& p) {
  Json j;
  j["name"] = p.name;
  for (const auto& f : kFields) j[f.key] = json_rational(p.*(f.member));
  j["maxAttempts"] = json_int(p.maxAttempts);
  return j;
}

ConstantsProfile profile_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError(0, "a profile must be a JSON object");
  const std::string base = j.contains("base") ? as_text(j.at("base")) : "paper";
  ConstantsProfile p;
  if (base == "paper") {
    p = ConstantsProfile::paper();
  } else if (base == "desk") {
    p = ConstantsProfile::desk();
  } else {
    throw ParseError(0, "unknown base profile '" + base + "'");
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "base") continue;
    if (key == "name") {
      p.name = as_text(value);
      continue;
    }
    if (key == "maxAttempts") {
      p.maxAttempts = std::stoull(as_text(value));
      continue;
    }
    bool known = false;
    for (const auto& f : kFields) {
      if (key == f.key) {
        p.*(f.member) = parse_rational(as_text(value));
        known = true;
      }
    }
    if (!known) throw ParseError(0, "unknown profile key '" + key + "'");
  }
  if (!j.contains("name")) p.name = base + "+overrides";
  p.validate();
  return p;
}

ConstantsProfile resolve_profile(const std::string& spec) {
  if (spec == "paper") return ConstantsProfile::paper();
  if (spec == "desk") return ConstantsProfile::desk();
  if (spec.rfind("file:", 0) == 0) {
    const std::string path = spec.substr(5);
    std::ifstream in(path);
    if (!in) throw PreconditionViolated("cannot open profile file '" + path + "'");
    Json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(0, std::string("profile file: ") + e.what());
    }
    return profile_from_json(j);
  }
  throw PreconditionViolated("unknown profile '" + spec + "'");
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest);
  std::ostringstream os;
  for (unsigned char c : digest) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(c);
  return os.str();
}

std::string record_timestamp() {
  const char* e = std::getenv("SOURCE_DATE_EPOCH");
  return e != nullptr && *e != '\0' ? std::string(e) : std::string("unset");
}

Json make_record(const std::string& command, const Json& config, const std::string& inputs,
                 const Json& outputs, const Json& checks, bool pass) {
  Json r;
  r["command"] = command;
  r["config"] = config;
  r["configHash"] = sha256_hex(canonical_dump(config));
  r["inputsDigest"] = sha256_hex(inputs);
  r["timestamp"] = record_timestamp();
  r["outputs"] = outputs;
  r["checks"] = checks;
  r["pass"] = pass;
  return r;
}

}  // namespace lolab
