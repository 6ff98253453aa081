#include "ghzforge/genuineness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

namespace ghzforge {
namespace {

struct SpectrumCluster {
  std::complex<double> representative;  // normalized cluster mean
  std::vector<Eigen::Index> members;    // positions in the eigenvalue vector
};

// Eigenvalue clusters of one operator's spectrum: values within the cluster
// tolerance of a chain neighbour (sorted by principal argument, wrapping
// around the circle) collapse to one cluster.
std::vector<SpectrumCluster> spectrum_clusters(const Eigen::VectorXcd& values) {
  std::vector<Eigen::Index> order(static_cast<size_t>(values.size()));
  for (size_t i = 0; i < order.size(); ++i) {
    order[i] = static_cast<Eigen::Index>(i);
  }
  auto principal_arg = [&](Eigen::Index i) {
    double a = std::arg(values[i]);
    if (a < 0) a += 2 * std::numbers::pi;
    return a;
  };
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return principal_arg(a) < principal_arg(b);
  });

  std::vector<std::vector<Eigen::Index>> groups;
  for (Eigen::Index i : order) {
    if (!groups.empty() && std::abs(values[i] - values[groups.back().back()]) <=
                               kEigenvalueClusterTol) {
      groups.back().push_back(i);
    } else {
      groups.push_back({i});
    }
  }
  if (groups.size() >= 2 &&
      std::abs(values[groups.front().front()] -
               values[groups.back().back()]) <= kEigenvalueClusterTol) {
    auto& front = groups.front();
    front.insert(front.end(), groups.back().begin(), groups.back().end());
    groups.pop_back();
  }

  std::vector<SpectrumCluster> clusters;
  clusters.reserve(groups.size());
  for (auto& group : groups) {
    std::complex<double> mean(0, 0);
    for (Eigen::Index i : group) mean += values[i];
    mean /= static_cast<double>(group.size());
    clusters.push_back({mean / std::abs(mean), std::move(group)});
  }
  return clusters;
}

// Advances an ascending size-|c| combination over {1,...,n}; false at the end.
bool next_combination(std::vector<int>& c, int n) {
  const int size = static_cast<int>(c.size());
  for (int i = size - 1; i >= 0; --i) {
    if (c[static_cast<size_t>(i)] < n - (size - 1 - i)) {
      ++c[static_cast<size_t>(i)];
      for (int j = i + 1; j < size; ++j) {
        c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

// True when some pair of operators obeys A B = e^{i 2 pi gamma} B A with
// gamma != 0; no common eigenvector can then exist (its two eigenvalues would
// have to differ from themselves by that scalar). Exact, no numerics.
bool scalar_commutator_obstruction(const std::vector<PhasedPermutation>& ops) {
  for (size_t a = 0; a + 1 < ops.size(); ++a) {
    for (size_t b = a + 1; b < ops.size(); ++b) {
      PhasedPermutation diff =
          compose(compose(ops[a], ops[b]), compose(ops[b], ops[a]).adjoint());
      auto s = scalar_phase(diff);
      if (s.has_value() && !s->value().is_zero()) return true;
    }
  }
  return false;
}

// Snaps an oracle eigenvalue of a restricted operator to its exact phase
// exponent global + k/d (the operator's d-th power is the scalar with d times
// the global phase, so eigenvalues cannot sit anywhere else).
PhaseExponent snapped_target(std::complex<double> lambda,
                             const PhaseExponent& global, int d) {
  std::complex<double> rel = lambda / phase_to_complex(global);
  double turns = std::arg(rel) / (2 * std::numbers::pi);
  long long k = std::llround(turns * d);
  k %= d;
  if (k < 0) k += d;
  PhaseExponent target = global + PhaseExponent(k, d);
  if (std::abs(phase_to_complex(target) - lambda) > 1e-6) {
    throw InternalError("common eigenvalue does not snap to a d-th root");
  }
  return target;
}

std::string count_candidates(int n, size_t observables) {
  if (n > 60 || observables > 60) return "more than 2^60";
  uint64_t betas = (uint64_t(1) << n) - static_cast<uint64_t>(n) - 2;
  uint64_t alphas = (uint64_t(1) << observables) - 1;
  return int128_to_string(static_cast<int128>(betas) *
                          static_cast<int128>(alphas));
}

}  // namespace

int pair_map(int j, int k, int n, int sigma) {
  if (n < 1) throw ContractError("pair map needs a positive party count");
  if (sigma != 1 && sigma != 2) {
    throw ContractError("pair map needs sigma in {1,2}, got " +
                        std::to_string(sigma));
  }
  if (j < 1 || j > n) {
    throw ContractError("pair map party " + std::to_string(j) +
                        " out of range 1.." + std::to_string(n));
  }
  if (k < 0 || k >= n) {
    throw ContractError("pair map shift index " + std::to_string(k) +
                        " out of range 0.." + std::to_string(n - 1));
  }
  int v = (2 * j - sigma - 1 - k) % n;
  if (v < 0) v += n;
  return v;
}

Restriction restrict_candidate(const ParadoxInstance& inst,
                               const std::vector<int>& beta,
                               const std::vector<size_t>& alpha) {
  inst.validate();
  if (beta.size() < 2 || beta.size() > static_cast<size_t>(inst.n)) {
    throw ContractError("party subset size " + std::to_string(beta.size()) +
                        " out of range 2.." + std::to_string(inst.n));
  }
  for (size_t i = 0; i < beta.size(); ++i) {
    if (beta[i] < 1 || beta[i] > inst.n) {
      throw ContractError("party " + std::to_string(beta[i]) +
                          " out of range 1.." + std::to_string(inst.n));
    }
    if (i > 0 && beta[i] <= beta[i - 1]) {
      throw ContractError("party subset must be strictly ascending");
    }
  }
  if (alpha.empty()) throw ContractError("observable subset must be nonempty");
  for (size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] >= inst.observables.size()) {
      throw ContractError("observable index " + std::to_string(alpha[i]) +
                          " out of range 0.." +
                          std::to_string(inst.observables.size() - 1));
    }
    if (i > 0 && alpha[i] <= alpha[i - 1]) {
      throw ContractError("observable subset must be strictly ascending");
    }
  }

  // Once-only filter: on beta, every local observable must occur 0 or >= 2
  // times across alpha. Maps keep settings ascending, so the reported
  // violation is the first in (party, setting) order.
  for (int party : beta) {
    std::map<Rational, int> counts;
    for (size_t idx : alpha) {
      ++counts[inst.observables[idx].params[static_cast<size_t>(party - 1)]];
    }
    for (const auto& [setting, count] : counts) {
      if (count == 1) {
        Restriction out;
        out.violation = OnceOnlyViolation{party, setting};
        return out;
      }
    }
  }

  SubsetCandidate cand;
  cand.beta = beta;
  cand.alpha = alpha;
  cand.restricted.reserve(alpha.size());
  for (size_t idx : alpha) {
    const MonomialOperator& full = inst.observables[idx];
    MonomialOperator cut;
    cut.n = static_cast<int>(beta.size());
    cut.d = inst.d;
    cut.global_phase = full.global_phase;
    cut.params.reserve(beta.size());
    for (int party : beta) {
      cut.params.push_back(full.params[static_cast<size_t>(party - 1)]);
    }
    cand.restricted.push_back(std::move(cut));
  }
  Restriction out;
  out.candidate = std::move(cand);
  return out;
}

std::optional<CommonEigenstate> common_eigenstate(
    const std::vector<Eigen::MatrixXcd>& ops, double tol) {
  if (ops.empty()) {
    throw ContractError("common eigenstate query needs at least one operator");
  }
  if (!(tol > 0)) throw ContractError("tolerance must be positive");
  const Eigen::Index m = ops[0].rows();
  if (m < 1) throw ContractError("operators must be nonempty square matrices");
  if (static_cast<uint64_t>(m) > kDefaultDenseDimLimit) {
    throw ResourceError("operator dimension " + std::to_string(m) +
                        " exceeds the dense limit " +
                        std::to_string(kDefaultDenseDimLimit));
  }
  Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(m, m);
  for (size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].rows() != m || ops[i].cols() != m) {
      throw ContractError("operator " + std::to_string(i) +
                          " dimension disagrees with operator 0");
    }
    double defect = (ops[i].adjoint() * ops[i] - identity).cwiseAbs().maxCoeff();
    if (defect > kUnitarityTol) {
      throw ContractError("operator " + std::to_string(i) +
                          " is not unitary (defect " + std::to_string(defect) +
                          ")");
    }
  }

  // Branches that may still contain a joint eigenvector, as orthonormal
  // column bases. Seed: eigenvalue-cluster eigenspaces of the first operator.
  const double keep_tol = std::max(tol, kEigenvalueClusterTol);
  std::vector<Eigen::MatrixXcd> bases;
  {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(ops[0], true);
    if (solver.info() != Eigen::Success) {
      throw InternalError("eigendecomposition of operator 0 failed");
    }
    for (const auto& cluster : spectrum_clusters(solver.eigenvalues())) {
      const auto size = static_cast<Eigen::Index>(cluster.members.size());
      Eigen::MatrixXcd block(m, size);
      for (Eigen::Index c = 0; c < size; ++c) {
        block.col(c) =
            solver.eigenvectors().col(cluster.members[static_cast<size_t>(c)]);
      }
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(block);
      Eigen::MatrixXcd basis =
          qr.householderQ() * Eigen::MatrixXcd::Identity(m, size);
      bases.push_back(std::move(basis));
    }
  }

  for (size_t t = 1; t < ops.size() && !bases.empty(); ++t) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(ops[t], false);
    if (solver.info() != Eigen::Success) {
      throw InternalError("eigendecomposition of operator " +
                          std::to_string(t) + " failed");
    }
    std::vector<SpectrumCluster> clusters =
        spectrum_clusters(solver.eigenvalues());
    std::vector<Eigen::MatrixXcd> refined;
    for (const auto& basis : bases) {
      Eigen::MatrixXcd mapped = ops[t] * basis;
      for (const auto& cluster : clusters) {
        const std::complex<double>& mu = cluster.representative;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mapped - mu * basis,
                                               Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        Eigen::Index keep = 0;
        for (Eigen::Index i = sv.size(); i-- > 0;) {
          if (sv[i] <= keep_tol) ++keep;
          else break;
        }
        if (keep == 0) continue;
        refined.push_back(basis * svd.matrixV().rightCols(keep));
      }
    }
    bases.swap(refined);
  }

  for (const auto& basis : bases) {
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
      Eigen::VectorXcd v = basis.col(c);
      v.normalize();
      std::vector<std::complex<double>> lambdas;
      lambdas.reserve(ops.size());
      double worst = 0.0;
      for (const auto& op : ops) {
        Eigen::VectorXcd image = op * v;
        std::complex<double> lambda = v.dot(image);
        double mag = std::abs(lambda);
        if (mag < 0.5) {
          worst = 2.0;
          break;
        }
        lambda /= mag;
        worst = std::max(worst, (image - lambda * v).norm());
        lambdas.push_back(lambda);
      }
      if (worst <= tol) {
        return CommonEigenstate{std::move(v), std::move(lambdas)};
      }
    }
  }
  return std::nullopt;
}

GenuinenessVerdict genuineness_check(const ParadoxInstance& inst,
                                     int sweep_limit, uint64_t search_budget,
                                     int workers) {
  inst.validate();
  if (sweep_limit < 2) {
    throw ContractError("sweep limit must be at least 2, got " +
                        std::to_string(sweep_limit));
  }
  if (inst.n > sweep_limit) {
    throw ResourceError(
        "party count " + std::to_string(inst.n) +
        " exceeds the genuineness sweep limit " + std::to_string(sweep_limit) +
        ": the sweep would visit " +
        count_candidates(inst.n, inst.observables.size()) + " candidates");
  }
  checked_dimension(inst.n, inst.d, kDefaultDenseDimLimit);
  const size_t terms = inst.observables.size();
  if (terms > 62) {
    throw ResourceError("observable count " + std::to_string(terms) +
                        " exceeds the subset mask width 62");
  }

  GenuinenessVerdict verdict;
  const uint64_t full_mask = (uint64_t(1) << terms) - 1;
  for (int size = 2; size < inst.n; ++size) {
    std::vector<int> beta(static_cast<size_t>(size));
    for (int i = 0; i < size; ++i) beta[static_cast<size_t>(i)] = i + 1;
    do {
      for (uint64_t mask = 1; mask <= full_mask; ++mask) {
        ++verdict.candidates_checked;
        std::vector<size_t> alpha;
        for (size_t i = 0; i < terms; ++i) {
          if (mask & (uint64_t(1) << i)) alpha.push_back(i);
        }
        Restriction res = restrict_candidate(inst, beta, alpha);
        if (!res.accepted()) continue;
        SubsetCandidate& cand = *res.candidate;

        std::vector<PhasedPermutation> perms;
        perms.reserve(cand.restricted.size());
        for (const auto& op : cand.restricted) {
          perms.push_back(PhasedPermutation::from(op));
        }
        if (scalar_commutator_obstruction(perms)) continue;

        ++verdict.oracle_calls;
        std::vector<Eigen::MatrixXcd> dense;
        dense.reserve(cand.restricted.size());
        for (const auto& op : cand.restricted) {
          dense.push_back(dense_matrix(op));
        }
        auto joint = common_eigenstate(dense);
        if (!joint.has_value()) continue;

        ParadoxInstance sub;
        sub.n = size;
        sub.d = inst.d;
        sub.sigma = size % 2 == 0 ? 2 : 1;
        sub.observables = cand.restricted;
        sub.certified = false;
        sub.state_phases.assign(static_cast<size_t>(inst.d), PhaseExponent());
        sub.targets.reserve(cand.restricted.size());
        for (size_t i = 0; i < cand.restricted.size(); ++i) {
          sub.targets.push_back(snapped_target(
              joint->eigenvalues[i], cand.restricted[i].global_phase, inst.d));
        }
        sub.validate();

        LhvSearchResult search = lhv_search(sub, search_budget, workers);
        if (search.satisfying_count != 0) continue;

        verdict.genuine = false;
        verdict.witness =
            GenuinenessWitness{std::move(cand), sub.targets, joint->state,
                               std::move(sub), std::move(search)};
        return verdict;
      }
    } while (next_combination(beta, inst.n));
  }
  return verdict;
}

}  // namespace ghzforge
