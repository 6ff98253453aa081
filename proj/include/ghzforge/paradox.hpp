/* Construction of multi-setting GHZ paradox instances.
 *
 * A paradox instance is a list of monomial observables together with the
 * d-th-root-of-unity phases they are required to realize on a shared GHZ
 * state. The canonical construction takes an admissible parameter vector r,
 * collects its n cyclic shifts, adds the plain shift observable when n is
 * even, and closes with the uniform vector b*(1,...,1), b = (1-d)/n.
 */
#pragma once

#include <map>
#include <string>
#include <vector>

#include "ghzforge/qudit.hpp"

namespace ghzforge {

using SettingVector = std::vector<Rational>;

// Entry j of the output is entry (j-k) mod n of the input (parties 1-based,
// any integer k).
SettingVector cyclic_shift(const SettingVector& r, long long k);

// Distinct entries with multiplicities, ordered by value.
std::map<Rational, int> setting_profile(const SettingVector& r);

struct VectorCheck {
  bool ok = false;
  std::string reason;  // first violated admissibility item; empty when ok
};

// Admissibility gate for parameter vectors at local dimension d:
//   (i)   b = (1-d)/n appears an odd number of times,
//   (ii)  every other nonzero entry appears an even number of times,
//   (iii) the entries sum to zero exactly.
// Admissible vectors with even d seed all-versus-nothing paradoxes.
VectorCheck check_vector(const SettingVector& r, int d);
inline bool is_admissible_vector(const SettingVector& r, int d) {
  return check_vector(r, d).ok;
}

// Three-setting family (0, b, c, ..., c) with b = (1-d)/n and
// c = (d-1)/(n(n-2)). Defined for even n >= 4 and even d.
SettingVector three_setting_vector(int n, int d);

// Qubit family with floor((n-1)/2) + 2 distinct settings, n >= 3: entries
// are b = -1/n once, a geometric ladder b_mu = 2^(s-1-mu) b/(1 - 2^s) twice
// each (1 <= mu <= s, s = floor((n-1)/2)), and 0 once when n is even.
SettingVector ladder_vector(int n);

struct ParadoxInstance {
  int n = 0;
  int d = 2;
  int sigma = 1;  // 1 for odd n, 2 for even n
  std::vector<MonomialOperator> observables;
  std::vector<PhaseExponent> targets;  // required eigenphase per observable
  bool certified = false;              // built through the admissibility gate
  // Level phases of the reference state; all-zero means the plain GHZ state.
  std::vector<PhaseExponent> state_phases;

  void validate() const;  // shape consistency, throws ContractError
  StateVector reference_state(
      uint64_t max_amplitudes = kDefaultAmplitudeBudget) const;
  // Setting multiset one party measures across all observables (1-based).
  std::map<Rational, int> settings_at(int party) const;
};

// Builds the cyclic-shift instance over r at local dimension d. The gate
// (admissible vector, even d) is enforced unless force is set; force-built
// instances are marked uncertified. Every observable's parameter sum must be
// an integer (otherwise no eigen relation exists at all) and every target is
// re-verified numerically whenever d^n <= verify_dim_limit.
ParadoxInstance assemble_instance(const SettingVector& r, int d,
                                  bool force = false,
                                  uint64_t verify_dim_limit = 4096);

// The 3-qubit instance {X Y Y, Y X Y, Y Y X, X X X} with targets
// (+1, +1, +1, -1), referenced to the state (|000> - |111>)/sqrt(2).
ParadoxInstance mermin_instance();

}  // namespace ghzforge
