/* Bell expressions over monomial observables: exact quantum values and
 * simulated local-measurement estimates.
 *
 * The canonical expression over an admissible qubit vector r is
 *   sum_k X(shift_k(r)) + (sigma-1) X(0,...,0) - X(b,...,b),
 * whose quantum expectation on the GHZ state is n + sigma while deterministic
 * local models stay at n + sigma - 2.
 */
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ghzforge/paradox.hpp"

namespace ghzforge {

struct BellTerm {
  double coefficient = 0.0;
  MonomialOperator op;
};

struct BellExpression {
  int n = 0;
  int d = 2;
  int sigma = 1;
  std::vector<BellTerm> terms;

  void validate() const;  // throws ContractError on shape violations
};

// Canonical expression for an admissible vector at d = 2 (gated).
BellExpression build_bell(const SettingVector& r);

// sum_i c_i * Re <psi| term_i |psi>.
double quantum_value(const BellExpression& expr, const StateVector& psi);

struct TermSample {
  double mean = 0.0;
  double std_error = 0.0;
  double variance = 0.0;
};

struct SampleReport {
  uint64_t shots = 0;
  uint64_t seed = 0;
  int workers = 1;
  std::string generator;  // random stream family used for the draws
  std::vector<TermSample> terms;
  double estimate = 0.0;
  double estimate_std_error = 0.0;
  // Outcome histogram per party, aggregated over all terms and shots.
  std::vector<std::vector<uint64_t>> marginal_counts;
  // Shot ranges assigned to each worker: (first shot, count).
  std::vector<std::pair<uint64_t, uint64_t>> partition;
  // Per-term batch means for export: batches[t][b] covers a contiguous
  // shot range; at most kSampleBatches batches.
  std::vector<std::vector<TermSample>> batches;
};

inline constexpr int kSampleBatches = 10;

// Simulated experiment: per term and shot, every party measures its local
// observable in its eigenbasis (sequential exact Born sampling, parties in
// order); the term sample is the real part of the product of outcome phases.
// The random stream is keyed by (seed, term, shot), so results do not depend
// on the worker partition.
SampleReport sample_correlations(const BellExpression& expr,
                                 const StateVector& psi, uint64_t shots,
                                 uint64_t seed, int workers = 1);

}  // namespace ghzforge
