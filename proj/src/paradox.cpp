#include "ghzforge/paradox.hpp"

#include <cstdlib>
#include <string>

namespace ghzforge {
namespace {

Rational special_entry(int n, int d) { return Rational(1 - d, n); }

// 2^e as an exact rational, e possibly negative.
Rational pow2(int e) {
  if (e >= 0) return Rational(int128(1) << e, 1);
  return Rational(1, int128(1) << (-e));
}

MonomialOperator shift_observable(const SettingVector& params, int d) {
  return MonomialOperator{static_cast<int>(params.size()), d, params,
                          PhaseExponent()};
}

PhaseExponent target_for_sum(const Rational& sum, int d, size_t index) {
  if (!sum.is_integer()) {
    throw ContractError("observable " + std::to_string(index) +
                        " cannot stabilize the shared state: parameter sum " +
                        sum.str() + " is not an integer");
  }
  int128 residue = sum.num() % d;
  if (residue < 0) residue += d;
  return PhaseExponent(Rational(residue, d));
}

}  // namespace

SettingVector cyclic_shift(const SettingVector& r, long long k) {
  const long long n = static_cast<long long>(r.size());
  if (n == 0) throw ContractError("cyclic shift of an empty vector");
  SettingVector out(r.size());
  for (long long j = 0; j < n; ++j) {
    long long src = (j - k) % n;
    if (src < 0) src += n;
    out[static_cast<size_t>(j)] = r[static_cast<size_t>(src)];
  }
  return out;
}

std::map<Rational, int> setting_profile(const SettingVector& r) {
  std::map<Rational, int> profile;
  for (const Rational& y : r) ++profile[y];
  return profile;
}

VectorCheck check_vector(const SettingVector& r, int d) {
  if (d < 2) throw ContractError("local dimension must be at least 2");
  const int n = static_cast<int>(r.size());
  if (n < 3) {
    return {false, "vector has " + std::to_string(n) + " entries, need >= 3"};
  }
  Rational b = special_entry(n, d);
  auto profile = setting_profile(r);

  auto it = profile.find(b);
  if (it == profile.end()) {
    return {false, "item i: special entry " + b.str() + " is absent"};
  }
  if (it->second % 2 == 0) {
    return {false, "item i: special entry " + b.str() + " appears " +
                       std::to_string(it->second) + " times, need odd"};
  }
  for (const auto& [y, count] : profile) {
    if (y == b || y.is_zero()) continue;
    if (count % 2 != 0) {
      return {false, "item ii: entry " + y.str() + " appears " +
                         std::to_string(count) + " times, need even"};
    }
  }
  Rational sum(0);
  for (const Rational& y : r) sum += y;
  if (!sum.is_zero()) {
    return {false, "item iii: entries sum to " + sum.str() + ", need 0"};
  }
  return {true, ""};
}

SettingVector three_setting_vector(int n, int d) {
  if (n < 4 || n % 2 != 0) {
    throw ContractError(
        "three-setting family needs even n >= 4, got n = " + std::to_string(n));
  }
  if (d < 2 || d % 2 != 0) {
    throw ContractError("three-setting family needs even d, got d = " +
                        std::to_string(d));
  }
  SettingVector r(static_cast<size_t>(n));
  r[0] = Rational(0);
  r[1] = special_entry(n, d);
  Rational c(d - 1, static_cast<int128>(n) * (n - 2));
  for (int j = 2; j < n; ++j) r[static_cast<size_t>(j)] = c;
  return r;
}

SettingVector ladder_vector(int n) {
  if (n < 3) {
    throw ContractError("ladder family needs n >= 3, got n = " +
                        std::to_string(n));
  }
  const int s = (n - 1) / 2;
  const int sigma = n - 2 * s;  // 1 for odd n, 2 for even n
  Rational b = special_entry(n, 2);
  Rational ladder_base = b / (Rational(1) - pow2(s));

  SettingVector r(static_cast<size_t>(n));
  for (int k = 1; k <= n; ++k) {
    // mu(k) = s + 1/2 - |s + 1/2 + sigma - k|, always an integer; track
    // twice the value to stay in integer arithmetic.
    int twice_mu = 2 * s + 1 - std::abs(2 * s + 1 + 2 * sigma - 2 * k);
    if (twice_mu % 2 != 0) {
      throw InternalError("ladder index 2*mu = " + std::to_string(twice_mu) +
                          " is odd at k = " + std::to_string(k));
    }
    int mu = twice_mu / 2;
    Rational entry;
    if (mu == 0) {
      entry = b;
    } else if (mu == -1) {
      if (sigma != 2) {
        throw InternalError("index mu = -1 arose with odd party count");
      }
      entry = Rational(0);
    } else if (mu >= 1 && mu <= s) {
      entry = ladder_base * pow2(s - 1 - mu);
    } else {
      throw InternalError("ladder index mu = " + std::to_string(mu) +
                          " out of range at k = " + std::to_string(k));
    }
    r[static_cast<size_t>(k - 1)] = entry;
  }
  return r;
}

void ParadoxInstance::validate() const {
  if (n < 2) throw ContractError("instance needs at least 2 parties");
  if (d < 2) throw ContractError("instance local dimension must be at least 2");
  const int expected_sigma = n % 2 == 0 ? 2 : 1;
  if (sigma != expected_sigma) {
    throw ContractError("sigma = " + std::to_string(sigma) +
                        " inconsistent with n = " + std::to_string(n));
  }
  if (observables.empty()) throw ContractError("instance has no observables");
  if (observables.size() != targets.size()) {
    throw ContractError("instance has " + std::to_string(observables.size()) +
                        " observables but " + std::to_string(targets.size()) +
                        " targets");
  }
  for (const auto& obs : observables) {
    obs.validate();
    if (obs.n != n || obs.d != d) {
      throw ContractError("observable shape disagrees with instance shape");
    }
  }
  if (state_phases.size() != static_cast<size_t>(d)) {
    throw ContractError("instance needs one state phase per level");
  }
}

StateVector ParadoxInstance::reference_state(uint64_t max_amplitudes) const {
  return ghz_state_with_phases(n, d, state_phases, max_amplitudes);
}

std::map<Rational, int> ParadoxInstance::settings_at(int party) const {
  if (party < 1 || party > n) {
    throw ContractError("party index " + std::to_string(party) +
                        " out of range 1.." + std::to_string(n));
  }
  std::map<Rational, int> profile;
  for (const auto& obs : observables) {
    ++profile[obs.params[static_cast<size_t>(party - 1)]];
  }
  return profile;
}

ParadoxInstance assemble_instance(const SettingVector& r, int d, bool force,
                                  uint64_t verify_dim_limit) {
  if (d < 2) throw ContractError("local dimension must be at least 2");
  const int n = static_cast<int>(r.size());
  if (n < 3) {
    throw ContractError("instance assembly needs at least 3 parties, got " +
                        std::to_string(n));
  }
  VectorCheck gate = check_vector(r, d);
  bool even_d = d % 2 == 0;
  if (!force) {
    if (!gate.ok) {
      throw ContractError("parameter vector rejected: " + gate.reason);
    }
    if (!even_d) {
      throw ContractError(
          "paradox construction needs even local dimension, got d = " +
          std::to_string(d) + " (pass force to experiment)");
    }
  }

  ParadoxInstance inst;
  inst.n = n;
  inst.d = d;
  inst.sigma = n % 2 == 0 ? 2 : 1;
  inst.certified = gate.ok && even_d;
  inst.state_phases.assign(static_cast<size_t>(d), PhaseExponent());

  Rational shift_sum(0);
  for (const Rational& y : r) shift_sum += y;

  for (int k = 0; k < n; ++k) {
    inst.observables.push_back(shift_observable(cyclic_shift(r, k), d));
    inst.targets.push_back(
        target_for_sum(shift_sum, d, inst.observables.size() - 1));
  }
  if (inst.sigma == 2) {
    inst.observables.push_back(
        shift_observable(SettingVector(static_cast<size_t>(n), Rational(0)), d));
    inst.targets.push_back(PhaseExponent());
  }
  Rational b = special_entry(n, d);
  inst.observables.push_back(
      shift_observable(SettingVector(static_cast<size_t>(n), b), d));
  inst.targets.push_back(
      target_for_sum(b * Rational(n), d, inst.observables.size() - 1));

  inst.validate();

  // Numeric safety net on top of the exact phase bookkeeping above.
  uint64_t dim = 1;
  bool small = true;
  for (int k = 0; k < n && small; ++k) {
    dim *= static_cast<uint64_t>(d);
    small = dim <= verify_dim_limit;
  }
  if (small) {
    StateVector phi = inst.reference_state();
    for (size_t i = 0; i < inst.observables.size(); ++i) {
      auto rel = eigen_relation(inst.observables[i], phi);
      if (!rel.has_value() || *rel != inst.targets[i]) {
        throw InternalError("constructed observable " + std::to_string(i) +
                            " failed target verification");
      }
    }
  }
  return inst;
}

ParadoxInstance mermin_instance() {
  const Rational x(0);
  const Rational y(-1, 2);
  ParadoxInstance inst;
  inst.n = 3;
  inst.d = 2;
  inst.sigma = 1;
  inst.certified = true;
  inst.state_phases = {PhaseExponent(), PhaseExponent(1, 2)};
  inst.observables = {
      shift_observable({x, y, y}, 2),
      shift_observable({y, x, y}, 2),
      shift_observable({y, y, x}, 2),
      shift_observable({x, x, x}, 2),
  };
  inst.targets = {PhaseExponent(), PhaseExponent(), PhaseExponent(),
                  PhaseExponent(1, 2)};
  inst.validate();

  StateVector phi = inst.reference_state();
  for (size_t i = 0; i < inst.observables.size(); ++i) {
    auto rel = eigen_relation(inst.observables[i], phi);
    if (!rel.has_value() || *rel != inst.targets[i]) {
      throw InternalError("observable " + std::to_string(i) +
                          " failed target verification");
    }
  }
  return inst;
}

}  // namespace ghzforge
