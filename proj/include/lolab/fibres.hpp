#pragma once

// Iterative fibre map: repeated container construction on the coordinates
// not yet captured.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lolab/inverse_lo.hpp"

namespace lolab {

struct FibreStep {
  IndexSet Z;  // coordinates still alive at the start of the step
  IndexSet X;
  IndexSet Y;
  IndexSet U;
  ContainerSet B;
  std::uint64_t rounds = 0;
};

struct FibreTrace {
  std::uint64_t p = 0;
  std::size_t n = 0;
  std::vector<FibreStep> steps;
  std::size_t kStar = 0;
  IndexSet terminalZ;
  std::size_t terminalSupport = 0;
};

/// True iff a residual support s keeps the iteration going: s >= coeff sqrt(n)
/// and s >= the container support floor.
bool above_fibre_threshold(std::size_t s, std::size_t n, const PrimeModulus& p,
                           const ConstantsProfile& profile);

/// ceil(log_{4/3} n) + 1 for n >= 1.
std::size_t kstar_limit(std::size_t n);

/// Runs the fibre iteration. Throws PreconditionViolated if rho(v) < rhoFloorCoeff / p
/// and the support is above the threshold, or RetryExhausted naming the failing step.
FibreTrace run_fibre(const ZpVector& v, const ConstantsProfile& profile, Stream& rng);

/// Re-checks every structural and shrinkage property of a trace.
CheckReport audit_trace(const ZpVector& v, const FibreTrace& trace, const ConstantsProfile& profile);

struct FibreCountBound {
  std::size_t kMax = 0;              // ceil(log_{4/3} n) + 1
  double containerChoicesLog = 0;    // mCoeff (log p)^2 per step
  double geometricSum = 0;           // sum_{k >= 1} (3/4)^{k-1} n = 4n
  double logBound = 0;               // kMax * containerChoicesLog + 2 log 2 * geometricSum
  double targetLog = 0;              // (n/64) log n
  bool withinTarget = false;         // logBound <= targetLog
};

/// Natural-log evaluation of the fibre counting argument.
FibreCountBound fibre_count_bound(std::size_t n, const PrimeModulus& p, const ConstantsProfile& profile);

/// Canonical key of a trace's (X_i, Y_i, B_i) sequence, for counting distinct fibres.
std::string fibre_key(const FibreTrace& trace);

}  // namespace lolab
