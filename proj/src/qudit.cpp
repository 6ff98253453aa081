#include "ghzforge/qudit.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ghzforge {
namespace {

void check_same_shape(int an, int ad, int bn, int bd, const char* what) {
  if (an != bn || ad != bd) {
    throw ContractError(std::string(what) + ": shape mismatch (" +
                        std::to_string(an) + " parties dim " +
                        std::to_string(ad) + " vs " + std::to_string(bn) +
                        " parties dim " + std::to_string(bd) + ")");
  }
}

int mod_d(long long v, int d) {
  int m = static_cast<int>(v % d);
  return m < 0 ? m + d : m;
}

// Phase exponent of the local observable on input digit s.
PhaseExponent local_phase(const LocalObservable& obs, int s) {
  Rational step = obs.r / Rational(obs.d);
  if (s == 0) return PhaseExponent(step - obs.r);
  return PhaseExponent(step);
}

}  // namespace

uint64_t checked_dimension(int n, int d, uint64_t limit) {
  if (n < 1) throw ContractError("party count must be at least 1");
  if (d < 2) throw ContractError("local dimension must be at least 2");
  uint64_t dim = 1;
  for (int k = 0; k < n; ++k) {
    if (dim > limit / static_cast<uint64_t>(d)) {
      throw ResourceError("state dimension " + std::to_string(d) + "^" +
                          std::to_string(n) + " exceeds the amplitude budget " +
                          std::to_string(limit));
    }
    dim *= static_cast<uint64_t>(d);
  }
  return dim;
}

void MonomialOperator::validate() const {
  if (n < 1) throw ContractError("operator needs at least 1 party");
  if (d < 2) throw ContractError("operator local dimension must be at least 2");
  if (params.size() != static_cast<size_t>(n)) {
    throw ContractError("operator has " + std::to_string(params.size()) +
                        " parameters for " + std::to_string(n) + " parties");
  }
}

PhasedPermutation::PhasedPermutation(int n, int d) : n_(n), d_(d) {
  if (n < 1) throw ContractError("operator needs at least 1 party");
  if (d < 2) throw ContractError("operator local dimension must be at least 2");
  shifts_.assign(n, 0);
  tables_.assign(n, std::vector<PhaseExponent>(d));
}

PhasedPermutation PhasedPermutation::from(const MonomialOperator& op) {
  op.validate();
  PhasedPermutation p(op.n, op.d);
  p.global_ = op.global_phase;
  for (int k = 0; k < op.n; ++k) {
    p.shifts_[k] = 1;
    LocalObservable obs{op.d, op.params[k]};
    for (int s = 0; s < op.d; ++s) {
      p.tables_[k][s] = local_phase(obs, s);
    }
  }
  return p;
}

PhasedPermutation PhasedPermutation::adjoint() const {
  PhasedPermutation out(n_, d_);
  out.global_ = -global_;
  for (int k = 0; k < n_; ++k) {
    int h = shifts_[k];
    out.shifts_[k] = mod_d(-h, d_);
    for (int t = 0; t < d_; ++t) {
      out.tables_[k][t] = -tables_[k][mod_d(t + h, d_)];
    }
  }
  return out;
}

PhasedPermutation compose(const PhasedPermutation& a,
                          const PhasedPermutation& b) {
  check_same_shape(a.n_, a.d_, b.n_, b.d_, "operator product");
  PhasedPermutation out(a.n_, a.d_);
  out.global_ = a.global_ + b.global_;
  for (int k = 0; k < a.n_; ++k) {
    out.shifts_[k] = mod_d(a.shifts_[k] + b.shifts_[k], a.d_);
    for (int s = 0; s < a.d_; ++s) {
      out.tables_[k][s] =
          b.tables_[k][s] + a.tables_[k][mod_d(s - b.shifts_[k], a.d_)];
    }
  }
  return out;
}

bool PhasedPermutation::is_diagonal() const {
  for (int h : shifts_) {
    if (h != 0) return false;
  }
  return true;
}

bool PhasedPermutation::is_identity() const {
  if (!is_diagonal() || !global_.is_zero()) return false;
  for (const auto& table : tables_) {
    for (const auto& ph : table) {
      if (!ph.is_zero()) return false;
    }
  }
  return true;
}

PhaseExponent PhasedPermutation::basis_phase(
    const std::vector<int>& digits) const {
  PhaseExponent total = global_;
  for (int k = 0; k < n_; ++k) {
    total += tables_[k][digits[k]];
  }
  return total;
}

std::vector<int> PhasedPermutation::map_digits(
    const std::vector<int>& digits) const {
  std::vector<int> out(n_);
  for (int k = 0; k < n_; ++k) {
    out[k] = mod_d(digits[k] - shifts_[k], d_);
  }
  return out;
}

std::optional<PhaseExponent> scalar_phase(const PhasedPermutation& op) {
  if (!op.is_diagonal()) return std::nullopt;
  PhaseExponent total = op.global();
  for (int k = 1; k <= op.n(); ++k) {
    for (int s = 1; s < op.d(); ++s) {
      if (op.table(k, s) != op.table(k, 0)) return std::nullopt;
    }
    total += op.table(k, 0);
  }
  return total;
}

StateVector::StateVector(int n, int d) : n_(n), d_(d) {
  uint64_t dim = checked_dimension(n, d, kDefaultAmplitudeBudget);
  amps_.assign(dim, {0.0, 0.0});
}

StateVector::StateVector(int n, int d, std::vector<std::complex<double>> amps)
    : n_(n), d_(d), amps_(std::move(amps)) {
  uint64_t dim = checked_dimension(n, d, ~uint64_t(0));
  if (amps_.size() != dim) {
    throw ContractError("state vector has " + std::to_string(amps_.size()) +
                        " amplitudes, expected " + std::to_string(dim));
  }
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

Eigen::VectorXcd StateVector::to_eigen() const {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(amps_.size()));
  for (size_t i = 0; i < amps_.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = amps_[i];
  }
  return v;
}

std::complex<double> inner_product(const StateVector& bra,
                                   const StateVector& ket) {
  check_same_shape(bra.n(), bra.d(), ket.n(), ket.d(), "inner product");
  std::complex<double> s{0.0, 0.0};
  for (uint64_t i = 0; i < bra.dim(); ++i) {
    s += std::conj(bra[i]) * ket[i];
  }
  return s;
}

StateVector ghz_state(int n, int d, uint64_t max_amplitudes) {
  return ghz_state_with_phases(n, d, std::vector<PhaseExponent>(d),
                               max_amplitudes);
}

StateVector ghz_state_with_phases(int n, int d,
                                  const std::vector<PhaseExponent>& level_phases,
                                  uint64_t max_amplitudes) {
  if (n < 2) throw ContractError("shared state needs at least 2 parties");
  if (level_phases.size() != static_cast<size_t>(d)) {
    throw ContractError("need one level phase per local level");
  }
  uint64_t dim = checked_dimension(n, d, max_amplitudes);
  std::vector<std::complex<double>> amps(dim, {0.0, 0.0});
  double w = 1.0 / std::sqrt(static_cast<double>(d));
  // |ss...s> sits at index s * (d^n - 1)/(d - 1).
  uint64_t repunit = (dim - 1) / static_cast<uint64_t>(d - 1);
  for (int s = 0; s < d; ++s) {
    amps[static_cast<uint64_t>(s) * repunit] =
        w * phase_to_complex(level_phases[s]);
  }
  return StateVector(n, d, std::move(amps));
}

Eigen::MatrixXcd local_matrix(const LocalObservable& obs) {
  if (obs.d < 2) throw ContractError("local dimension must be at least 2");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(obs.d, obs.d);
  for (int s = 0; s < obs.d; ++s) {
    int t = mod_d(s - 1, obs.d);
    m(t, s) = phase_to_complex(local_phase(obs, s));
  }
  return m;
}

std::vector<LocalEigenpair> local_eigenbasis(const LocalObservable& obs) {
  if (obs.d < 2) throw ContractError("local dimension must be at least 2");
  std::vector<LocalEigenpair> out;
  out.reserve(obs.d);
  double w = 1.0 / std::sqrt(static_cast<double>(obs.d));
  for (int k = 0; k < obs.d; ++k) {
    LocalEigenpair pair;
    pair.eigenvalue = PhaseExponent(Rational(k, obs.d));
    pair.vector = Eigen::VectorXcd(obs.d);
    Rational step = (Rational(k) - obs.r) / Rational(obs.d);
    for (int s = 0; s < obs.d; ++s) {
      pair.vector[s] =
          w * phase_to_complex(PhaseExponent(step * Rational(s)));
    }
    out.push_back(std::move(pair));
  }
  return out;
}

StateVector apply(const PhasedPermutation& op, const StateVector& psi) {
  check_same_shape(op.n(), op.d(), psi.n(), psi.d(), "apply");
  const auto& in = psi.amplitudes();
  std::vector<std::complex<double>> out(in.size(), {0.0, 0.0});
  const int n = op.n();
  const int d = op.d();
  std::vector<int> digits(n, 0);
  for (uint64_t idx = 0; idx < in.size(); ++idx) {
    if (in[idx] != 0.0) {
      PhaseExponent phase = op.basis_phase(digits);
      std::vector<int> mapped = op.map_digits(digits);
      uint64_t out_idx = 0;
      for (int k = 0; k < n; ++k) {
        out_idx = out_idx * static_cast<uint64_t>(d) +
                  static_cast<uint64_t>(mapped[k]);
      }
      out[out_idx] += phase_to_complex(phase) * in[idx];
    }
    // Odometer over digits, least significant (last party) first.
    for (int k = n - 1; k >= 0; --k) {
      if (++digits[k] < d) break;
      digits[k] = 0;
    }
  }
  return StateVector(psi.n(), psi.d(), std::move(out));
}

StateVector apply(const MonomialOperator& op, const StateVector& psi) {
  return apply(PhasedPermutation::from(op), psi);
}

PhasedPermutation operator_product(const MonomialOperator& a,
                                   const MonomialOperator& b) {
  return compose(PhasedPermutation::from(a), PhasedPermutation::from(b));
}

PhasedPermutation embed_local(const LocalObservable& obs, int party, int n) {
  if (party < 1 || party > n) {
    throw ContractError("party index " + std::to_string(party) +
                        " out of range 1.." + std::to_string(n));
  }
  PhasedPermutation out(n, obs.d);
  out.shifts_[party - 1] = 1;
  for (int s = 0; s < obs.d; ++s) {
    out.tables_[party - 1][s] = local_phase(obs, s);
  }
  return out;
}

Eigen::MatrixXcd dense_matrix(const PhasedPermutation& op, uint64_t max_dim) {
  uint64_t dim = checked_dimension(op.n(), op.d(), max_dim);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  const int n = op.n();
  const int d = op.d();
  std::vector<int> digits(n, 0);
  for (uint64_t idx = 0; idx < dim; ++idx) {
    std::vector<int> mapped = op.map_digits(digits);
    uint64_t out_idx = 0;
    for (int k = 0; k < n; ++k) {
      out_idx = out_idx * static_cast<uint64_t>(d) +
                static_cast<uint64_t>(mapped[k]);
    }
    m(static_cast<Eigen::Index>(out_idx), static_cast<Eigen::Index>(idx)) =
        phase_to_complex(op.basis_phase(digits));
    for (int k = n - 1; k >= 0; --k) {
      if (++digits[k] < d) break;
      digits[k] = 0;
    }
  }
  return m;
}

Eigen::MatrixXcd dense_matrix(const MonomialOperator& op, uint64_t max_dim) {
  return dense_matrix(PhasedPermutation::from(op), max_dim);
}

std::optional<PhaseExponent> eigen_relation(const PhasedPermutation& op,
                                            const StateVector& psi,
                                            double tol) {
  double norm = psi.norm();
  if (norm == 0.0) throw ContractError("eigen relation on the zero vector");
  StateVector phi = apply(op, psi);
  std::complex<double> c = inner_product(psi, phi) / (norm * norm);
  if (std::abs(c) < 1e-12) return std::nullopt;
  double turns = std::arg(c) / (2.0 * std::numbers::pi);
  long long k = std::llround(turns * op.d());
  PhaseExponent lambda(Rational(mod_d(k, op.d()), op.d()));
  std::complex<double> w = phase_to_complex(lambda);
  double residual2 = 0.0;
  for (uint64_t i = 0; i < psi.dim(); ++i) {
    residual2 += std::norm(phi[i] - w * psi[i]);
  }
  if (std::sqrt(residual2) > tol * norm) return std::nullopt;
  return lambda;
}

std::optional<PhaseExponent> eigen_relation(const MonomialOperator& op,
                                            const StateVector& psi,
                                            double tol) {
  return eigen_relation(PhasedPermutation::from(op), psi, tol);
}

}  // namespace ghzforge
