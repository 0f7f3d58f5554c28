#pragma once

// Canonical JSON: object keys sorted, integers and rationals written as
// decimal strings, two-space indentation, trailing newline.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "lolab/fibres.hpp"
#include "lolab/inverse_lo.hpp"
#include "lolab/matrix_lab.hpp"

namespace lolab {

using Json = nlohmann::json;

std::string canonical_dump(const Json& j);

Json json_int(std::uint64_t x);
Json json_int(const BigInt& x);
Json json_rational(const Rational& x);
Json json_indices(const std::vector<std::size_t>& s);
Json json_residues(const std::vector<Residue>& s);

Json to_json(const RhoResult& r);
Json to_json(const ContainerSet& c);
Json to_json(const ContainerCertificate& c);
Json to_json(const FibreTrace& t);
Json to_json(const CheckReport& r);
Json to_json(const SingularityEstimate& e);
Json to_json(const RankProfile& r);

/// Parses "a", "a/b" or a JSON integer into a rational. Throws ParseError(0, ...).
Rational parse_rational(const std::string& s);

}  // namespace lolab
