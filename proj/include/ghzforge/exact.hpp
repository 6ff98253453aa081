/* Exact rational arithmetic and rational phase exponents.
 *
 * Every phase in the library is e^{i*2*pi*x} for a rational x, so all operator
 * algebra stays exact; conversion to complex doubles happens only at the
 * state-vector boundary.
 */
#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <string>

#include "ghzforge/errors.hpp"

namespace ghzforge {

// 128-bit signed integers back all rational bookkeeping. Denominators in the
// ladder-family vectors grow like n*(2^s - 1)*2^s, which overflows 64 bits
// near n = 70; 128 bits also absorbs the cross-multiplications inside
// comparisons and sums without intermediate overflow for every size the
// enumeration budgets allow.
using int128 = __int128;

int128 parse_int128(const std::string& text);
std::string int128_to_string(int128 value);

// Reduced fraction num/den with den > 0. Arithmetic throws ContractError on
// 128-bit overflow instead of wrapping.
class Rational {
 public:
  Rational() = default;
  Rational(long long value) : num_(value) {}  // NOLINT: integers coerce freely
  Rational(int128 num, int128 den);

  int128 num() const { return num_; }
  int128 den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int128 floor() const;
  double to_double() const;

  // Serialized form is "p" for integers and "p/q" otherwise, e.g. "-1/6".
  std::string str() const;
  static Rational parse(const std::string& text);

  Rational operator-() const { return Rational(-num_, den_, Reduced{}); }
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  // Canonical form makes memberwise equality exact.
  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  struct Reduced {};  // tag: caller guarantees the fraction is canonical
  Rational(int128 num, int128 den, Reduced) : num_(num), den_(den) {}

  int128 num_ = 0;
  int128 den_ = 1;
};

// Phase exponent x of a unit complex e^{i*2*pi*x}, kept reduced in [0, 1).
// Addition is modulo 1, so (PhaseExponent, +) is the torsion group Q/Z.
class PhaseExponent {
 public:
  PhaseExponent() = default;
  explicit PhaseExponent(const Rational& turns);
  PhaseExponent(int128 num, int128 den) : PhaseExponent(Rational(num, den)) {}

  const Rational& value() const { return value_; }
  bool is_zero() const { return value_.is_zero(); }

  PhaseExponent operator-() const;
  PhaseExponent& operator+=(const PhaseExponent& o);
  PhaseExponent& operator-=(const PhaseExponent& o) { return *this += -o; }
  friend PhaseExponent operator+(PhaseExponent a, const PhaseExponent& b) {
    return a += b;
  }
  friend PhaseExponent operator-(PhaseExponent a, const PhaseExponent& b) {
    return a -= b;
  }
  // k copies of this phase, exactly.
  PhaseExponent scaled(int128 k) const;

  friend bool operator==(const PhaseExponent&, const PhaseExponent&) = default;
  friend std::strong_ordering operator<=>(const PhaseExponent&,
                                          const PhaseExponent&) = default;

  std::string str() const { return value_.str(); }
  static PhaseExponent parse(const std::string& text);

 private:
  Rational value_;
};

// e^{i*2*pi*x}. Quarter-turn phases (denominator 1, 2, 4) map to exact
// {1, -1, i, -i} so that qubit-level products carry no rounding at all.
std::complex<double> phase_to_complex(const PhaseExponent& x);

}  // namespace ghzforge
