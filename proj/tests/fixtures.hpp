/* Hand-built instances shared by the genuineness, acceptance and CLI tests. */
#pragma once

#include "ghzforge/paradox.hpp"

namespace ghzforge::testing {

// Reducible 4-party qubit instance: the three-party rows {XYY, YXY, YYX, XXX}
// each extended by X on party 4, plus the all-X observable. Restricting to
// parties {1,2,3} reproduces the embedded three-party paradox, so the
// instance is not genuinely 4-partite. The two all-X rows carry conflicting
// targets, hence certified stays false.
inline ParadoxInstance reducible_control_instance() {
  const Rational x(0);
  const Rational y(-1, 2);
  ParadoxInstance inst;
  inst.n = 4;
  inst.d = 2;
  inst.sigma = 2;
  inst.certified = false;
  inst.state_phases = {PhaseExponent(), PhaseExponent()};
  auto add = [&inst](SettingVector params, PhaseExponent target) {
    inst.observables.push_back(
        MonomialOperator{4, 2, std::move(params), PhaseExponent()});
    inst.targets.push_back(target);
  };
  add({x, y, y, x}, PhaseExponent());
  add({y, x, y, x}, PhaseExponent());
  add({y, y, x, x}, PhaseExponent());
  add({x, x, x, x}, PhaseExponent(1, 2));
  add({x, x, x, x}, PhaseExponent());
  inst.validate();
  return inst;
}

}  // namespace ghzforge::testing
