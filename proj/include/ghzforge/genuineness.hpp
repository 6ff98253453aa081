/* Genuineness of paradox instances under party reduction.
 *
 * An instance is genuinely n-partite when no party subset beta together with
 * an observable subset alpha forms a smaller paradox of its own. The sweep
 * enumerates all (beta, alpha) candidates, discards those where some local
 * observable occurs exactly once on beta (a single occurrence can always be
 * gauged away classically), screens out subsets whose operators fail to
 * commute up to a nontrivial scalar, and asks a dense numeric oracle for a
 * common eigenstate of the rest. A candidate whose common eigenstate exists
 * but whose eigenvalue targets admit no deterministic local model is a
 * sub-paradox and defeats genuineness.
 */
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ghzforge/lhv.hpp"
#include "ghzforge/paradox.hpp"

namespace ghzforge {

inline constexpr int kDefaultSweepLimit = 8;
inline constexpr double kEigenstateTol = 1e-10;
inline constexpr double kEigenvalueClusterTol = 1e-8;
inline constexpr double kUnitarityTol = 1e-8;

// Partner shift index measuring the same doubled setting at party j: among
// the n cyclic shifts of an admissible ladder vector, the two shifts whose
// vectors place a twice-occurring entry at party j are {k, pair_map(j,k)}.
// Parties are 1-based, shift indices 0-based.
int pair_map(int j, int k, int n, int sigma);

// A party subset with an observable subset restricted to it.
struct SubsetCandidate {
  std::vector<int> beta;      // ascending party indices, 1-based
  std::vector<size_t> alpha;  // ascending observable indices
  std::vector<MonomialOperator> restricted;  // on |beta| parties
};

// First (party, setting) whose local observable occurs exactly once.
struct OnceOnlyViolation {
  int party = 0;  // original 1-based party label
  Rational setting;
};

struct Restriction {
  std::optional<SubsetCandidate> candidate;
  std::optional<OnceOnlyViolation> violation;
  bool accepted() const { return candidate.has_value(); }
};

// Drops all parties outside beta from the alpha observables. Candidates in
// which some local observable appears exactly once across alpha are rejected
// (rejection is a value, not an error); such a candidate can never constrain
// a deterministic model beyond one free factor.
Restriction restrict_candidate(const ParadoxInstance& inst,
                               const std::vector<int>& beta,
                               const std::vector<size_t>& alpha);

struct CommonEigenstate {
  Eigen::VectorXcd state;  // unit vector
  std::vector<std::complex<double>> eigenvalues;  // unimodular, one per op
};

// Simultaneous eigenvector of a family of unitary matrices, found by
// eigenspace refinement: split the space along the first operator's
// eigenvalue clusters, then repeatedly intersect with near-eigenspaces of the
// following operators (eigenvalue candidates come from each operator's own
// spectrum, subspace intersection from a singular value decomposition).
// Returns a vector v with max_i |ops[i] v - lambda_i v| <= tol, or nullopt
// when no common eigenstate exists. Complete up to the clustering tolerance.
std::optional<CommonEigenstate> common_eigenstate(
    const std::vector<Eigen::MatrixXcd>& ops, double tol = kEigenstateTol);

struct GenuinenessWitness {
  SubsetCandidate candidate;
  std::vector<PhaseExponent> targets;  // snapped eigenvalue exponents
  Eigen::VectorXcd state;              // the oracle's common eigenstate
  ParadoxInstance sub_instance;        // independently re-verifiable
  LhvSearchResult search;              // exhaustive, satisfying_count == 0
};

struct GenuinenessVerdict {
  bool genuine = true;
  std::optional<GenuinenessWitness> witness;  // present iff not genuine
  uint64_t candidates_checked = 0;  // (beta, alpha) pairs enumerated
  uint64_t oracle_calls = 0;        // candidates reaching the dense oracle
};

// Full sweep over party subsets beta (2 <= |beta| < n, sizes ascending, then
// lexicographic) and observable subsets alpha (ascending index-set bitmask).
// The first candidate whose restricted family shares a common eigenstate yet
// admits no satisfying deterministic model becomes the witness. The worker
// count is forwarded to the per-candidate assignment search.
GenuinenessVerdict genuineness_check(
    const ParadoxInstance& inst, int sweep_limit = kDefaultSweepLimit,
    uint64_t search_budget = kDefaultEnumerationBudget, int workers = 1);

}  // namespace ghzforge
