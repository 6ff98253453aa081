/* Local-hidden-variable analysis: parity certificates, exhaustive assignment
 * search, and exact classical maxima of Bell expressions.
 *
 * A deterministic local model fixes one outcome exponent a in {0,...,d-1} for
 * every (party, setting) pair; the model satisfies an observable when the sum
 * of its parties' exponents hits the target exponent mod d.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ghzforge/bell.hpp"
#include "ghzforge/paradox.hpp"

namespace ghzforge {

inline constexpr uint64_t kDefaultEnumerationBudget = uint64_t(1) << 28;

// Outcome exponent per (party, setting); index 0 holds party 1.
using LhvAssignment = std::vector<std::map<Rational, int>>;

enum class ParityVerdict { kContradiction, kSatisfiableParity, kInconclusive };

std::string to_string(ParityVerdict v);

struct ParityCertificate {
  // Occurrence count of every (party, setting) pair across the observables;
  // these are the coefficients of the aggregated outcome equation.
  std::vector<std::map<Rational, int>> counts;
  int rhs_exponent = 0;  // sum of target exponents mod d
  ParityVerdict verdict = ParityVerdict::kInconclusive;
};

// Aggregates all observable equations. Contradiction iff d is even, every
// occurrence count is even, and the rhs exponent is odd (no assignment can
// satisfy an even-sum equation with an odd rhs). Satisfiable-parity iff the
// aggregated equation is solvable (gcd of d and all counts divides the rhs);
// inconclusive otherwise.
ParityCertificate parity_certificate(const ParadoxInstance& inst);

struct LhvSearchResult {
  uint64_t satisfying_count = 0;
  std::optional<LhvAssignment> witness;  // first satisfying, counter order
  uint64_t enumerated = 0;
};

// Exhaustive search over all d^(sum of per-party setting counts) assignments.
// Assignment digits are ordered by (party ascending, setting ascending); the
// first pair is the most significant counter digit, making witnesses and
// counts independent of the worker count.
LhvSearchResult lhv_search(const ParadoxInstance& inst,
                           uint64_t budget = kDefaultEnumerationBudget,
                           int workers = 1);

struct ClassicalBoundResult {
  double value = 0.0;
  // Present at d = 2 with integer coefficients: the bound as an exact integer.
  std::optional<long long> exact_value;
  LhvAssignment witness;
  uint64_t patterns_enumerated = 0;
};

// Exact maximum of the expression over deterministic local models. The value
// of an assignment depends only on the per-term exponent sums, so the search
// enumerates the subgroup of (Z_d)^terms reachable from the per-(party,
// setting) incidence columns instead of the full assignment space.
ClassicalBoundResult classical_bound(
    const BellExpression& expr, uint64_t budget = kDefaultEnumerationBudget);

}  // namespace ghzforge
