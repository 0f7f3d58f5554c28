#pragma once

// Profiles, experiment records and digests.

#include <string>

#include "lolab/canonical_json.hpp"
#include "lolab/inverse_lo.hpp"

namespace lolab {

Json profile_to_json(const ConstantsProfile& p);
/// Reads a profile document. A "base" key ("paper" or "desk", default paper)
/// selects the starting point; any other known key overrides it.
ConstantsProfile profile_from_json(const Json& j);

/// "paper", "desk" or "file:<path>". Throws PreconditionViolated on unknown names.
ConstantsProfile resolve_profile(const std::string& spec);

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& data);

/// SOURCE_DATE_EPOCH when set, otherwise "unset", so records stay reproducible.
std::string record_timestamp();

/// Self-describing record: config, digests, outputs and per-check flags.
Json make_record(const std::string& command, const Json& config, const std::string& inputs,
                 const Json& outputs, const Json& checks, bool pass);

}  // namespace lolab
