#include "ghzforge/exact.hpp"

#include <cmath>
#include <numbers>

namespace ghzforge {
namespace {

int128 checked_add(int128 a, int128 b) {
  int128 r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw ContractError("rational arithmetic overflow in 128-bit addition");
  }
  return r;
}

int128 checked_mul(int128 a, int128 b) {
  int128 r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw ContractError("rational arithmetic overflow in 128-bit multiplication");
  }
  return r;
}

int128 gcd128(int128 a, int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr int128 kInt128Min = int128(1) << 127;

}  // namespace

int128 parse_int128(const std::string& text) {
  size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    neg = text[i] == '-';
    ++i;
  }
  if (i == text.size()) {
    throw ParseError("expected an integer, got \"" + text + "\"");
  }
  // Accumulate toward the sign so INT128_MIN parses without overflow.
  int128 value = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c < '0' || c > '9') {
      throw ParseError("invalid digit '" + std::string(1, c) + "' in \"" +
                       text + "\"");
    }
    int128 digit = neg ? -(c - '0') : (c - '0');
    int128 next;
    if (__builtin_mul_overflow(value, int128(10), &next) ||
        __builtin_add_overflow(next, digit, &next)) {
      throw ParseError("integer out of 128-bit range: \"" + text + "\"");
    }
    value = next;
  }
  return value;
}

std::string int128_to_string(int128 value) {
  if (value == 0) return "0";
  bool neg = value < 0;
  // Peel digits from |value|; negate digit-wise to survive INT128_MIN.
  std::string digits;
  unsigned __int128 mag =
      neg ? ~static_cast<unsigned __int128>(value) + 1
          : static_cast<unsigned __int128>(value);
  while (mag != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  if (neg) digits.push_back('-');
  return std::string(digits.rbegin(), digits.rend());
}

Rational::Rational(int128 num, int128 den) {
  if (den == 0) {
    throw ContractError("rational with zero denominator");
  }
  if (num == kInt128Min || den == kInt128Min) {
    throw ContractError("rational arithmetic overflow in 128-bit negation");
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

int128 Rational::floor() const {
  int128 q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
  std::string s = int128_to_string(num_);
  if (den_ != 1) {
    s += "/";
    s += int128_to_string(den_);
  }
  return s;
}

Rational Rational::parse(const std::string& text) {
  size_t slash = text.find('/');
  if (slash == std::string::npos) {
    return Rational(parse_int128(text), 1);
  }
  if (text.find('/', slash + 1) != std::string::npos) {
    throw ParseError("multiple '/' in rational \"" + text + "\"");
  }
  int128 num = parse_int128(text.substr(0, slash));
  int128 den = parse_int128(text.substr(slash + 1));
  if (den == 0) {
    throw ParseError("zero denominator in rational \"" + text + "\"");
  }
  return Rational(num, den);
}

Rational& Rational::operator+=(const Rational& o) {
  // Reduce by gcd of denominators first to keep intermediates small.
  int128 g = gcd128(den_, o.den_);
  int128 lhs_scale = o.den_ / g;
  int128 rhs_scale = den_ / g;
  int128 num = checked_add(checked_mul(num_, lhs_scale),
                           checked_mul(o.num_, rhs_scale));
  int128 den = checked_mul(den_, lhs_scale);
  *this = Rational(num, den);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  // Cross-reduce before multiplying.
  int128 g1 = gcd128(num_, o.den_);
  int128 g2 = gcd128(o.num_, den_);
  int128 num = checked_mul(num_ / g1, o.num_ / g2);
  int128 den = checked_mul(den_ / g2, o.den_ / g1);
  *this = Rational(num, den, Reduced{});
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) {
    throw ContractError("rational division by zero");
  }
  return *this *= Rational(o.den_, o.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  int128 lhs = checked_mul(a.num_, b.den_);
  int128 rhs = checked_mul(b.num_, a.den_);
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

PhaseExponent::PhaseExponent(const Rational& turns) {
  value_ = turns - Rational(turns.floor(), 1);
}

PhaseExponent PhaseExponent::operator-() const {
  return PhaseExponent(-value_);
}

PhaseExponent& PhaseExponent::operator+=(const PhaseExponent& o) {
  *this = PhaseExponent(value_ + o.value_);
  return *this;
}

PhaseExponent PhaseExponent::scaled(int128 k) const {
  return PhaseExponent(value_ * Rational(k, 1));
}

PhaseExponent PhaseExponent::parse(const std::string& text) {
  return PhaseExponent(Rational::parse(text));
}

std::complex<double> phase_to_complex(const PhaseExponent& x) {
  const Rational& v = x.value();
  if (v.den() == 1) return {1.0, 0.0};
  if (v.den() == 2) return {-1.0, 0.0};
  if (v.den() == 4) return v.num() == 1 ? std::complex<double>{0.0, 1.0}
                                        : std::complex<double>{0.0, -1.0};
  double angle = 2.0 * std::numbers::pi * v.to_double();
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace ghzforge
