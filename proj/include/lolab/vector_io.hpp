#pragma once

// Vector files: one vector per line, written "p=<prime>; r_1 r_2 ... r_n".
// Blank lines are skipped.

#include <iosfwd>
#include <string>
#include <vector>

#include "lolab/zp_core.hpp"

namespace lolab {

/// Throws ParseError (with the 1-based line number) or RangeError.
std::vector<ZpVector> parse_vectors(std::istream& in);
std::vector<ZpVector> load_vectors(const std::string& path);

std::string format_vector(const ZpVector& v);
void save_vectors(const std::string& path, const std::vector<ZpVector>& vs);

}  // namespace lolab
