#include "ghzforge/bell.hpp"

#include <cmath>
#include <thread>

namespace ghzforge {
namespace {

// splitmix64 finalizer; the stream for one (seed, term, shot) triple is
// independent of how shots are partitioned across workers.
uint64_t mix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

struct SplitMix {
  uint64_t state;
  uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
};

uint64_t stream_key(uint64_t seed, uint64_t term, uint64_t shot) {
  uint64_t k = mix64(seed);
  k = mix64(k ^ (term + 1));
  return mix64(k ^ (shot + 1));
}

struct Accumulator {
  std::vector<double> sum, sumsq;                 // per term
  std::vector<std::vector<double>> batch_sum;     // [term][batch]
  std::vector<std::vector<double>> batch_sumsq;
  std::vector<std::vector<uint64_t>> batch_n;
  std::vector<std::vector<uint64_t>> marginals;   // [party][outcome]

  Accumulator(size_t terms, size_t batches, int n, int d)
      : sum(terms, 0.0),
        sumsq(terms, 0.0),
        batch_sum(terms, std::vector<double>(batches, 0.0)),
        batch_sumsq(terms, std::vector<double>(batches, 0.0)),
        batch_n(terms, std::vector<uint64_t>(batches, 0)),
        marginals(static_cast<size_t>(n),
                  std::vector<uint64_t>(static_cast<size_t>(d), 0)) {}

  void merge(const Accumulator& o) {
    for (size_t t = 0; t < sum.size(); ++t) {
      sum[t] += o.sum[t];
      sumsq[t] += o.sumsq[t];
      for (size_t b = 0; b < batch_sum[t].size(); ++b) {
        batch_sum[t][b] += o.batch_sum[t][b];
        batch_sumsq[t][b] += o.batch_sumsq[t][b];
        batch_n[t][b] += o.batch_n[t][b];
      }
    }
    for (size_t j = 0; j < marginals.size(); ++j) {
      for (size_t k = 0; k < marginals[j].size(); ++k) {
        marginals[j][k] += o.marginals[j][k];
      }
    }
  }
};

TermSample finalize(double sum, double sumsq, uint64_t n) {
  TermSample s;
  if (n == 0) return s;
  s.mean = sum / static_cast<double>(n);
  if (n > 1) {
    double var = (sumsq - sum * sum / static_cast<double>(n)) /
                 static_cast<double>(n - 1);
    s.variance = var > 0.0 ? var : 0.0;
    s.std_error = std::sqrt(s.variance / static_cast<double>(n));
  }
  return s;
}

}  // namespace

void BellExpression::validate() const {
  if (n < 1) throw ContractError("expression needs at least 1 party");
  if (d < 2) throw ContractError("expression local dimension must be >= 2");
  if (terms.empty()) throw ContractError("expression has no terms");
  for (const auto& term : terms) {
    if (!std::isfinite(term.coefficient)) {
      throw ContractError("expression coefficient is not finite");
    }
    term.op.validate();
    if (term.op.n != n || term.op.d != d) {
      throw ContractError("term shape disagrees with expression shape");
    }
  }
}

BellExpression build_bell(const SettingVector& r) {
  VectorCheck gate = check_vector(r, 2);
  if (!gate.ok) {
    throw ContractError("parameter vector rejected: " + gate.reason);
  }
  const int n = static_cast<int>(r.size());
  BellExpression expr;
  expr.n = n;
  expr.d = 2;
  expr.sigma = n % 2 == 0 ? 2 : 1;
  for (int k = 0; k < n; ++k) {
    expr.terms.push_back(
        {1.0, MonomialOperator{n, 2, cyclic_shift(r, k), PhaseExponent()}});
  }
  if (expr.sigma == 2) {
    expr.terms.push_back(
        {1.0, MonomialOperator{n, 2, SettingVector(static_cast<size_t>(n),
                                                   Rational(0)),
                               PhaseExponent()}});
  }
  expr.terms.push_back(
      {-1.0, MonomialOperator{n, 2,
                              SettingVector(static_cast<size_t>(n),
                                            Rational(-1, n)),
                              PhaseExponent()}});
  expr.validate();
  return expr;
}

double quantum_value(const BellExpression& expr, const StateVector& psi) {
  expr.validate();
  if (expr.n != psi.n() || expr.d != psi.d()) {
    throw ContractError("expression and state shapes disagree");
  }
  double total = 0.0;
  for (const auto& term : expr.terms) {
    total += term.coefficient *
             inner_product(psi, apply(term.op, psi)).real();
  }
  return total;
}

SampleReport sample_correlations(const BellExpression& expr,
                                 const StateVector& psi, uint64_t shots,
                                 uint64_t seed, int workers) {
  expr.validate();
  if (expr.n != psi.n() || expr.d != psi.d()) {
    throw ContractError("expression and state shapes disagree");
  }
  if (shots < 1) throw ContractError("need at least one shot");
  if (workers < 1) throw ContractError("need at least one worker");

  const int n = expr.n;
  const int d = expr.d;
  const size_t num_terms = expr.terms.size();
  const size_t num_batches =
      static_cast<size_t>(std::min<uint64_t>(kSampleBatches, shots));

  // Unit-norm working copy.
  std::vector<std::complex<double>> base = psi.amplitudes();
  double norm = psi.norm();
  if (norm == 0.0) throw ContractError("sampling from the zero vector");
  for (auto& a : base) a /= norm;

  // Local eigenbases per term and party.
  std::vector<std::vector<std::vector<LocalEigenpair>>> bases(num_terms);
  for (size_t t = 0; t < num_terms; ++t) {
    bases[t].reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      bases[t].push_back(
          local_eigenbasis({d, expr.terms[t].op.params[static_cast<size_t>(j)]}));
    }
  }

  auto run_range = [&](uint64_t first, uint64_t count, Accumulator& acc) {
    std::vector<std::complex<double>> buffer(base.size());
    std::vector<std::complex<double>> scratch(base.size());
    for (uint64_t shot = first; shot < first + count; ++shot) {
      size_t batch = static_cast<size_t>(shot * num_batches / shots);
      for (size_t t = 0; t < num_terms; ++t) {
        SplitMix rng{stream_key(seed, t, shot)};
        buffer = base;
        uint64_t m = buffer.size();
        int exponent_sum = 0;
        for (int j = 0; j < n; ++j) {
          uint64_t sub = m / static_cast<uint64_t>(d);
          // Amplitudes of each local eigenvector, parties j+1..n remaining.
          double total_prob = 0.0;
          std::vector<double> probs(static_cast<size_t>(d), 0.0);
          for (int k = 0; k < d; ++k) {
            const Eigen::VectorXcd& e = bases[t][static_cast<size_t>(j)]
                                            [static_cast<size_t>(k)].vector;
            double p = 0.0;
            for (uint64_t rest = 0; rest < sub; ++rest) {
              std::complex<double> amp{0.0, 0.0};
              for (int s = 0; s < d; ++s) {
                amp += std::conj(e[s]) *
                       buffer[static_cast<uint64_t>(s) * sub + rest];
              }
              scratch[static_cast<uint64_t>(k) * sub + rest] = amp;
              p += std::norm(amp);
            }
            probs[static_cast<size_t>(k)] = p;
            total_prob += p;
          }
          double u = rng.uniform() * total_prob;
          int outcome = d - 1;
          double cum = 0.0;
          for (int k = 0; k < d; ++k) {
            cum += probs[static_cast<size_t>(k)];
            if (u < cum) {
              outcome = k;
              break;
            }
          }
          double inv = 1.0 / std::sqrt(probs[static_cast<size_t>(outcome)]);
          for (uint64_t rest = 0; rest < sub; ++rest) {
            buffer[rest] =
                scratch[static_cast<uint64_t>(outcome) * sub + rest] * inv;
          }
          exponent_sum += outcome;
          acc.marginals[static_cast<size_t>(j)][static_cast<size_t>(outcome)]++;
          m = sub;
        }
        PhaseExponent product = expr.terms[t].op.global_phase +
                                PhaseExponent(exponent_sum, d);
        double value = phase_to_complex(product).real();
        acc.sum[t] += value;
        acc.sumsq[t] += value * value;
        acc.batch_sum[t][batch] += value;
        acc.batch_sumsq[t][batch] += value * value;
        acc.batch_n[t][batch]++;
      }
    }
  };

  SampleReport report;
  report.shots = shots;
  report.seed = seed;
  report.workers = workers;
  report.generator = "splitmix64";

  uint64_t w = static_cast<uint64_t>(workers);
  for (uint64_t i = 0; i < w; ++i) {
    uint64_t first = shots * i / w;
    uint64_t last = shots * (i + 1) / w;
    if (last > first) report.partition.emplace_back(first, last - first);
  }

  Accumulator total(num_terms, num_batches, n, d);
  if (report.partition.size() <= 1) {
    run_range(0, shots, total);
  } else {
    std::vector<Accumulator> parts(report.partition.size(),
                                   Accumulator(num_terms, num_batches, n, d));
    std::vector<std::thread> threads;
    threads.reserve(parts.size());
    for (size_t i = 0; i < parts.size(); ++i) {
      threads.emplace_back(run_range, report.partition[i].first,
                           report.partition[i].second, std::ref(parts[i]));
    }
    for (auto& th : threads) th.join();
    for (const auto& part : parts) total.merge(part);
  }

  report.marginal_counts = total.marginals;
  report.terms.reserve(num_terms);
  report.batches.assign(num_terms, {});
  for (size_t t = 0; t < num_terms; ++t) {
    report.terms.push_back(finalize(total.sum[t], total.sumsq[t], shots));
    for (size_t b = 0; b < num_batches; ++b) {
      report.batches[t].push_back(finalize(
          total.batch_sum[t][b], total.batch_sumsq[t][b], total.batch_n[t][b]));
    }
  }
  double estimate = 0.0;
  double var = 0.0;
  for (size_t t = 0; t < num_terms; ++t) {
    estimate += expr.terms[t].coefficient * report.terms[t].mean;
    var += expr.terms[t].coefficient * expr.terms[t].coefficient *
           report.terms[t].std_error * report.terms[t].std_error;
  }
  report.estimate = estimate;
  report.estimate_std_error = std::sqrt(var);
  return report;
}

}  // namespace ghzforge
