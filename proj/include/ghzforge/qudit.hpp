/* Qudit states and the monomial observable family.
 *
 * The single-qudit observable with rational parameter r is the unitary that
 * lowers each basis level by one (cyclically) with phase exponent r/d on
 * |1>..|d-1> and r/d - r on |0>:
 *
 *   U_r |s> = e^{i*2*pi*(r/d)} |s-1>      for s = 1..d-1
 *   U_r |0> = e^{i*2*pi*(r/d - r)} |d-1>
 *
 * U_r^d = 1, so eigenvalues are d-th roots of unity. Tensor products of such
 * observables, and anything reachable from them by products and adjoints,
 * stay in "phased permutation" form: a per-party cyclic shift plus exact
 * per-level phase exponents. All operator algebra here is exact; complex
 * doubles appear only when acting on state vectors.
 */
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ghzforge/exact.hpp"

namespace ghzforge {

inline constexpr double kEigenRelationTol = 1e-10;
inline constexpr double kDenseAgreementTol = 1e-12;
inline constexpr uint64_t kDefaultAmplitudeBudget = uint64_t(1) << 26;
inline constexpr uint64_t kDefaultDenseDimLimit = 4096;

// d^n if it fits the budget, otherwise throws ResourceError naming the limit.
uint64_t checked_dimension(int n, int d, uint64_t limit);

// One party's observable: local dimension d >= 2 and parameter r.
struct LocalObservable {
  int d = 2;
  Rational r;
};

// n-fold tensor of local observables, times a global phase.
struct MonomialOperator {
  int n = 0;
  int d = 2;
  std::vector<Rational> params;  // size n, party k uses params[k-1]
  PhaseExponent global_phase;

  void validate() const;  // throws ContractError on shape violations
  friend bool operator==(const MonomialOperator&,
                         const MonomialOperator&) = default;
};

// Closure of MonomialOperator under composition and adjoint: each party
// cyclically lowers its digit by shift[k] and contributes table[k][s] to the
// phase when its input digit is s.
class PhasedPermutation {
 public:
  PhasedPermutation(int n, int d);  // identity
  static PhasedPermutation from(const MonomialOperator& op);

  int n() const { return n_; }
  int d() const { return d_; }
  int shift(int party) const { return shifts_[party - 1]; }
  const PhaseExponent& table(int party, int digit) const {
    return tables_[party - 1][digit];
  }
  const PhaseExponent& global() const { return global_; }

  PhasedPermutation adjoint() const;
  // compose(a, b) applies b first: the operator product a*b.
  friend PhasedPermutation compose(const PhasedPermutation& a,
                                   const PhasedPermutation& b);

  bool is_diagonal() const;  // every shift is zero
  bool is_identity() const;
  // Phase exponent applied to basis state |digits...> together with the
  // lowered output digits. digits uses party order, party 1 first.
  PhaseExponent basis_phase(const std::vector<int>& digits) const;
  std::vector<int> map_digits(const std::vector<int>& digits) const;

  friend bool operator==(const PhasedPermutation&,
                         const PhasedPermutation&) = default;
  friend PhasedPermutation embed_local(const LocalObservable& obs, int party,
                                       int n);

 private:
  int n_;
  int d_;
  std::vector<int> shifts_;
  std::vector<std::vector<PhaseExponent>> tables_;
  PhaseExponent global_;
};

// If the operator is a scalar multiple of the identity permutation-wise
// (diagonal with one uniform phase), returns that phase.
std::optional<PhaseExponent> scalar_phase(const PhasedPermutation& op);

// Dense complex vector over (Z_d)^n with party 1 as the most significant
// digit: |s1 s2 ... sn> sits at index ((s1*d + s2)*d + ...)*d + sn.
class StateVector {
 public:
  StateVector(int n, int d);  // zero vector
  StateVector(int n, int d, std::vector<std::complex<double>> amps);

  int n() const { return n_; }
  int d() const { return d_; }
  uint64_t dim() const { return amps_.size(); }
  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
  std::complex<double>& operator[](uint64_t i) { return amps_[i]; }
  const std::complex<double>& operator[](uint64_t i) const { return amps_[i]; }

  double norm() const;
  Eigen::VectorXcd to_eigen() const;

 private:
  int n_;
  int d_;
  std::vector<std::complex<double>> amps_;
};

std::complex<double> inner_product(const StateVector& bra,
                                   const StateVector& ket);

// (|00..0> + |11..1> + ... + |d-1 ... d-1>)/sqrt(d).
StateVector ghz_state(int n, int d,
                      uint64_t max_amplitudes = kDefaultAmplitudeBudget);
// Same with amplitude e^{i*2*pi*level_phases[s]}/sqrt(d) on level s.
StateVector ghz_state_with_phases(
    int n, int d, const std::vector<PhaseExponent>& level_phases,
    uint64_t max_amplitudes = kDefaultAmplitudeBudget);

Eigen::MatrixXcd local_matrix(const LocalObservable& obs);

// Eigenpairs of the local observable, exactly: eigenvalue exponent k/d pairs
// with the unit vector whose s-th component is e^{i*2*pi*s(k-r)/d}/sqrt(d).
struct LocalEigenpair {
  PhaseExponent eigenvalue;
  Eigen::VectorXcd vector;
};
std::vector<LocalEigenpair> local_eigenbasis(const LocalObservable& obs);

StateVector apply(const PhasedPermutation& op, const StateVector& psi);
StateVector apply(const MonomialOperator& op, const StateVector& psi);

// Operator product a*b in closed form (b acts first).
PhasedPermutation operator_product(const MonomialOperator& a,
                                   const MonomialOperator& b);

// The local observable acting on one party of an n-party system.
PhasedPermutation embed_local(const LocalObservable& obs, int party, int n);

Eigen::MatrixXcd dense_matrix(const PhasedPermutation& op,
                              uint64_t max_dim = kDefaultDenseDimLimit);
Eigen::MatrixXcd dense_matrix(const MonomialOperator& op,
                              uint64_t max_dim = kDefaultDenseDimLimit);

// If op maps psi to e^{i*2*pi*k/d} psi for some integer k (residual within
// tol * |psi|), returns that phase exponent; otherwise nullopt.
std::optional<PhaseExponent> eigen_relation(const PhasedPermutation& op,
                                            const StateVector& psi,
                                            double tol = kEigenRelationTol);
std::optional<PhaseExponent> eigen_relation(const MonomialOperator& op,
                                            const StateVector& psi,
                                            double tol = kEigenRelationTol);

}  // namespace ghzforge
