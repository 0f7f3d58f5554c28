#pragma once

// The acceptance suite: ten numbered criteria covering the exact oracles,
// the deterministic lemmas, the container and fibre constructions, the
// matrix checks and reproducibility.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "lolab/canonical_json.hpp"
#include "lolab/inverse_lo.hpp"

namespace lolab {

struct SuiteOptions {
  std::uint64_t seed = 42;
  unsigned workers = 1;
  ConstantsProfile profile = ConstantsProfile::desk();  // used by criteria 4 and 5
  std::set<int> criteria = {1, 2, 3, 4, 5, 6, 7, 8, 9};
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  Json details;
  double seconds = 0;       // wall time; not part of the artifact
  double limitSeconds = 0;  // 0 when the criterion has no runtime limit
};

CriterionResult run_criterion(int id, const SuiteOptions& options);
std::vector<CriterionResult> run_suite(const SuiteOptions& options);

/// Deterministic artifact for a suite run: options and per-criterion
/// details, without timings.
Json suite_artifact(const std::vector<CriterionResult>& results, const SuiteOptions& options);

std::string criterion_title(int id);

/// "[PASS] criterion k: title (summary)" style line.
std::string criterion_line(const CriterionResult& r);

/// All primes p with 3 < p <= 101.
const std::vector<std::uint64_t>& small_primes();

}  // namespace lolab
