#include "ghzforge/lhv.hpp"

#include <algorithm>
#include <numeric>
#include <thread>
#include <tuple>

namespace ghzforge {
namespace {

// Exponent e with phase = e/d turns; requires the phase to be a d-th root.
int exponent_of(const PhaseExponent& phase, int d, const std::string& what) {
  const Rational& v = phase.value();
  int128 den = v.den();
  if (den > d || d % static_cast<long long>(den) != 0) {
    throw ContractError(what + " phase " + v.str() +
                        " is not a power of the d-th root of unity (d = " +
                        std::to_string(d) + ")");
  }
  int128 e = v.num() * (d / static_cast<long long>(den));
  e %= d;
  if (e < 0) e += d;
  return static_cast<int>(e);
}

struct DigitSpace {
  int d = 2;
  std::vector<std::vector<Rational>> settings;  // per party, ascending
  std::vector<size_t> offsets;                  // flat offset per party
  size_t total_digits = 0;

  size_t position(int party, const Rational& setting) const {
    const auto& list = settings[static_cast<size_t>(party - 1)];
    auto it = std::lower_bound(list.begin(), list.end(), setting);
    return offsets[static_cast<size_t>(party - 1)] +
           static_cast<size_t>(it - list.begin());
  }
};

DigitSpace digit_space(const std::vector<MonomialOperator>& observables, int n,
                       int d) {
  DigitSpace space;
  space.d = d;
  space.settings.resize(static_cast<size_t>(n));
  for (const auto& obs : observables) {
    for (int j = 0; j < n; ++j) {
      auto& list = space.settings[static_cast<size_t>(j)];
      const Rational& y = obs.params[static_cast<size_t>(j)];
      auto it = std::lower_bound(list.begin(), list.end(), y);
      if (it == list.end() || !(*it == y)) list.insert(it, y);
    }
  }
  space.offsets.resize(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    space.offsets[static_cast<size_t>(j)] = space.total_digits;
    space.total_digits += space.settings[static_cast<size_t>(j)].size();
  }
  return space;
}

LhvAssignment assignment_from_digits(const DigitSpace& space,
                                     const std::vector<int>& digits) {
  LhvAssignment out(space.settings.size());
  for (size_t j = 0; j < space.settings.size(); ++j) {
    for (size_t i = 0; i < space.settings[j].size(); ++i) {
      out[j][space.settings[j][i]] = digits[space.offsets[j] + i];
    }
  }
  return out;
}

std::vector<int> digits_of_counter(uint64_t counter, size_t len, int d) {
  std::vector<int> digits(len, 0);
  for (size_t i = len; i-- > 0;) {
    digits[i] = static_cast<int>(counter % static_cast<uint64_t>(d));
    counter /= static_cast<uint64_t>(d);
  }
  return digits;
}

struct SearchChunk {
  uint64_t count = 0;
  std::optional<uint64_t> first;
};

}  // namespace

std::string to_string(ParityVerdict v) {
  switch (v) {
    case ParityVerdict::kContradiction:
      return "contradiction";
    case ParityVerdict::kSatisfiableParity:
      return "satisfiable-parity";
    case ParityVerdict::kInconclusive:
      return "inconclusive";
  }
  throw InternalError("unknown parity verdict");
}

ParityCertificate parity_certificate(const ParadoxInstance& inst) {
  inst.validate();
  ParityCertificate cert;
  cert.counts.reserve(static_cast<size_t>(inst.n));
  for (int j = 1; j <= inst.n; ++j) {
    cert.counts.push_back(inst.settings_at(j));
  }

  int rhs = 0;
  for (size_t i = 0; i < inst.observables.size(); ++i) {
    PhaseExponent effective =
        inst.targets[i] - inst.observables[i].global_phase;
    rhs = (rhs + exponent_of(effective, inst.d,
                             "target of observable " + std::to_string(i))) %
          inst.d;
  }
  cert.rhs_exponent = rhs;

  bool all_even = true;
  int g = inst.d;
  for (const auto& party : cert.counts) {
    for (const auto& [setting, count] : party) {
      if (count % 2 != 0) all_even = false;
      g = std::gcd(g, count);
    }
  }
  if (inst.d % 2 == 0 && all_even && rhs % 2 == 1) {
    cert.verdict = ParityVerdict::kContradiction;
  } else if (rhs % g == 0) {
    cert.verdict = ParityVerdict::kSatisfiableParity;
  } else {
    cert.verdict = ParityVerdict::kInconclusive;
  }
  return cert;
}

LhvSearchResult lhv_search(const ParadoxInstance& inst, uint64_t budget,
                           int workers) {
  inst.validate();
  if (workers < 1) throw ContractError("need at least one worker");
  DigitSpace space = digit_space(inst.observables, inst.n, inst.d);

  uint64_t total = 1;
  for (size_t i = 0; i < space.total_digits; ++i) {
    if (total > budget / static_cast<uint64_t>(inst.d)) {
      throw ResourceError(
          "assignment space " + std::to_string(inst.d) + "^" +
          std::to_string(space.total_digits) + " exceeds the enumeration "
          "budget " + std::to_string(budget) +
          "; the parity certificate handles large instances exactly");
    }
    total *= static_cast<uint64_t>(inst.d);
  }

  // Flattened equations: n digit positions plus the rhs exponent each.
  const size_t t = inst.observables.size();
  const size_t n = static_cast<size_t>(inst.n);
  std::vector<size_t> positions(t * n);
  std::vector<int> rhs(t);
  for (size_t i = 0; i < t; ++i) {
    const auto& obs = inst.observables[i];
    for (size_t j = 0; j < n; ++j) {
      positions[i * n + j] =
          space.position(static_cast<int>(j + 1), obs.params[j]);
    }
    rhs[i] = exponent_of(inst.targets[i] - obs.global_phase, inst.d,
                         "target of observable " + std::to_string(i));
  }

  const int d = inst.d;
  auto scan = [&](uint64_t begin, uint64_t end, SearchChunk& chunk) {
    std::vector<int> digits = digits_of_counter(begin, space.total_digits, d);
    for (uint64_t c = begin; c < end; ++c) {
      bool ok = true;
      for (size_t i = 0; i < t && ok; ++i) {
        int sum = 0;
        const size_t* pos = &positions[i * n];
        for (size_t j = 0; j < n; ++j) sum += digits[pos[j]];
        ok = sum % d == rhs[i];
      }
      if (ok) {
        ++chunk.count;
        if (!chunk.first) chunk.first = c;
      }
      for (size_t i = space.total_digits; i-- > 0;) {
        if (++digits[i] < d) break;
        digits[i] = 0;
      }
    }
  };

  uint64_t w = std::min<uint64_t>(static_cast<uint64_t>(workers), total);
  std::vector<SearchChunk> chunks(static_cast<size_t>(w));
  if (w <= 1) {
    scan(0, total, chunks[0]);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(chunks.size());
    for (uint64_t i = 0; i < w; ++i) {
      threads.emplace_back(scan, total * i / w, total * (i + 1) / w,
                           std::ref(chunks[static_cast<size_t>(i)]));
    }
    for (auto& th : threads) th.join();
  }

  LhvSearchResult result;
  result.enumerated = total;
  std::optional<uint64_t> first;
  for (const auto& chunk : chunks) {
    result.satisfying_count += chunk.count;
    if (chunk.first && (!first || *chunk.first < *first)) first = chunk.first;
  }
  if (first) {
    result.witness = assignment_from_digits(
        space, digits_of_counter(*first, space.total_digits, d));
  }
  return result;
}

ClassicalBoundResult classical_bound(const BellExpression& expr,
                                     uint64_t budget) {
  expr.validate();
  const int d = expr.d;
  const size_t t = expr.terms.size();
  std::vector<MonomialOperator> ops;
  ops.reserve(t);
  for (const auto& term : expr.terms) ops.push_back(term.op);
  DigitSpace space = digit_space(ops, expr.n, d);

  // Incidence columns: column p lists the terms measuring digit p.
  std::vector<std::vector<int>> columns(space.total_digits,
                                        std::vector<int>(t, 0));
  for (size_t i = 0; i < t; ++i) {
    for (int j = 1; j <= expr.n; ++j) {
      size_t p = space.position(j, ops[i].params[static_cast<size_t>(j - 1)]);
      columns[p][i] = (columns[p][i] + 1) % d;
    }
  }

  // The term value vector x = (sum of digits per term mod d) ranges over the
  // subgroup of (Z_d)^t generated by the columns; enumerate it breadth-first
  // and remember one generating step per state for witness reconstruction.
  std::map<std::vector<int>, size_t> index;
  std::vector<std::vector<int>> states;
  std::vector<std::tuple<size_t, size_t, int>> parent;  // state, column, scale
  states.emplace_back(t, 0);
  index[states[0]] = 0;
  parent.emplace_back(0, 0, 0);
  for (size_t head = 0; head < states.size(); ++head) {
    for (size_t p = 0; p < columns.size(); ++p) {
      for (int scale = 1; scale < d; ++scale) {
        std::vector<int> next = states[head];
        for (size_t i = 0; i < t; ++i) {
          next[i] = (next[i] + scale * columns[p][i]) % d;
        }
        if (index.emplace(next, states.size()).second) {
          if (states.size() >= budget) {
            throw ResourceError(
                "reachable pattern count exceeds the enumeration budget " +
                std::to_string(budget));
          }
          states.push_back(std::move(next));
          parent.emplace_back(head, p, scale);
        }
      }
    }
  }

  // Evaluate every reachable pattern; ties keep the first in search order.
  std::vector<double> term_values(t);
  double best = 0.0;
  size_t best_idx = 0;
  bool have_best = false;
  for (size_t idx = 0; idx < states.size(); ++idx) {
    double value = 0.0;
    for (size_t i = 0; i < t; ++i) {
      PhaseExponent product = expr.terms[i].op.global_phase +
                              PhaseExponent(states[idx][i], d);
      value += expr.terms[i].coefficient * phase_to_complex(product).real();
    }
    if (!have_best || value > best) {
      best = value;
      best_idx = idx;
      have_best = true;
    }
  }

  // Reconstruct one witness assignment for the best pattern.
  std::vector<int> digits(space.total_digits, 0);
  for (size_t idx = best_idx; idx != 0;) {
    auto [prev, p, scale] = parent[idx];
    digits[p] = (digits[p] + scale) % d;
    idx = prev;
  }

  ClassicalBoundResult result;
  result.value = best;
  result.witness = assignment_from_digits(space, digits);
  result.patterns_enumerated = states.size();

  if (d == 2) {
    bool integral = true;
    for (const auto& term : expr.terms) {
      if (term.coefficient != std::floor(term.coefficient)) integral = false;
      if (term.op.global_phase.value().den() > 2) integral = false;
    }
    if (integral) result.exact_value = std::llround(best);
  }
  return result;
}

}  // namespace ghzforge
