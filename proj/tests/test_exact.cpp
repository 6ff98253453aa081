#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <string>

#include "ghzforge/exact.hpp"
#include "test_util.hpp"

using namespace ghzforge;
using ghzforge::testing::make_rng;
using ghzforge::testing::random_phase;
using ghzforge::testing::random_rational;

TEST_CASE("rational reduction and canonical form") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1 - 2, 6) == Rational(-1, 6));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(3, -6).num() == -1);
  CHECK(Rational(3, -6).den() == 2);
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(-4, -2) == Rational(2));

  // Reconstructing from an already reduced pair changes nothing.
  Rational r(-5, 15);
  CHECK(Rational(r.num(), r.den()) == r);

  CHECK_THROWS_AS(Rational(1, 0), ContractError);
}

TEST_CASE("rational arithmetic") {
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(1, 2) - Rational(1, 2) == Rational(0));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(1, 2) / Rational(-1, 4) == Rational(-2));
  CHECK(-Rational(1, 3) == Rational(-1, 3));
  CHECK_THROWS_AS(Rational(1, 2) / Rational(0), ContractError);

  auto rng = make_rng(11);
  for (int i = 0; i < 2000; ++i) {
    Rational a = random_rational(rng, 50, 50);
    Rational b = random_rational(rng, 50, 50);
    Rational c = random_rational(rng, 50, 50);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + (-a) == Rational(0));
    if (!b.is_zero()) CHECK(a / b * b == a);
  }
}

TEST_CASE("rational ordering") {
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(Rational(-1, 3) < Rational(0));
  CHECK(Rational(0) < Rational(1, 8));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(7, 3) > Rational(2));
  CHECK(Rational(1, 2) <= Rational(2, 4));
}

TEST_CASE("rational floor and double conversion") {
  CHECK(Rational(7, 2).floor() == 3);
  CHECK(Rational(-1, 6).floor() == -1);
  CHECK(Rational(-12, 6).floor() == -2);
  CHECK(Rational(0).floor() == 0);
  CHECK(Rational(1, 4).to_double() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(Rational(-1, 3).to_double() ==
        doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("rational string round trip") {
  CHECK(Rational(-1, 6).str() == "-1/6");
  CHECK(Rational(3).str() == "3");
  CHECK(Rational(1, 2).str() == "1/2");
  CHECK(Rational::parse("-1/6") == Rational(-1, 6));
  CHECK(Rational::parse("3") == Rational(3));
  CHECK(Rational::parse("+5/10") == Rational(1, 2));

  auto rng = make_rng(12);
  for (int i = 0; i < 500; ++i) {
    Rational a = random_rational(rng, 1000, 1000);
    CHECK(Rational::parse(a.str()) == a);
  }

  CHECK_THROWS_AS(Rational::parse(""), ParseError);
  CHECK_THROWS_AS(Rational::parse("1/2/3"), ParseError);
  CHECK_THROWS_AS(Rational::parse("a/2"), ParseError);
  CHECK_THROWS_AS(Rational::parse("1/0"), ParseError);
  CHECK_THROWS_AS(Rational::parse("1.5"), ParseError);
}

TEST_CASE("rational overflow is reported, not wrapped") {
  Rational big(int128(1) << 100, 1);
  CHECK_THROWS_AS(big * big, ContractError);
  Rational odd_big((int128(1) << 126) + 1, (int128(1) << 125) + 5);
  CHECK_THROWS_AS(odd_big + Rational(1, 3), ContractError);
}

TEST_CASE("int128 string round trip") {
  CHECK(int128_to_string(0) == "0");
  CHECK(int128_to_string(-42) == "-42");
  CHECK(parse_int128("170141183460469231731687303715884105727") ==
        (int128(1) << 126) - 1 + (int128(1) << 126));
  int128 min = int128(1) << 127;
  CHECK(parse_int128(int128_to_string(min)) == min);
  CHECK_THROWS_AS(parse_int128("170141183460469231731687303715884105728"),
                  ParseError);
}

TEST_CASE("phase exponents live in [0,1) and add modulo 1") {
  CHECK(PhaseExponent(1, 2) + PhaseExponent(1, 2) == PhaseExponent());
  CHECK(PhaseExponent(5, 6) + PhaseExponent(1, 3) == PhaseExponent(1, 6));
  CHECK(PhaseExponent(Rational(-1, 4)).value() == Rational(3, 4));
  CHECK(PhaseExponent(Rational(7, 2)).value() == Rational(1, 2));
  CHECK((-PhaseExponent(1, 3)).value() == Rational(2, 3));
  CHECK((-PhaseExponent()).value() == Rational(0));
  CHECK(PhaseExponent(1, 3).scaled(5).value() == Rational(2, 3));
  CHECK(PhaseExponent(1, 3).scaled(-1) == -PhaseExponent(1, 3));
  CHECK(PhaseExponent(1, 7).scaled(7).is_zero());

  auto rng = make_rng(13);
  for (int i = 0; i < 2000; ++i) {
    PhaseExponent a = random_phase(rng, 60);
    PhaseExponent b = random_phase(rng, 60);
    PhaseExponent c = random_phase(rng, 60);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a + b == b + a);
    CHECK((a + (-a)).is_zero());
    CHECK(a.value() >= Rational(0));
    CHECK(a.value() < Rational(1));
  }
}

TEST_CASE("phase to complex is exact on quarter turns") {
  CHECK(phase_to_complex(PhaseExponent()) == std::complex<double>(1.0, 0.0));
  CHECK(phase_to_complex(PhaseExponent(1, 2)) ==
        std::complex<double>(-1.0, 0.0));
  CHECK(phase_to_complex(PhaseExponent(1, 4)) ==
        std::complex<double>(0.0, 1.0));
  CHECK(phase_to_complex(PhaseExponent(3, 4)) ==
        std::complex<double>(0.0, -1.0));
}

TEST_CASE("phase to complex is a group homomorphism numerically") {
  auto rng = make_rng(14);
  for (int i = 0; i < 2000; ++i) {
    PhaseExponent a = random_phase(rng, 97);
    PhaseExponent b = random_phase(rng, 97);
    std::complex<double> lhs = phase_to_complex(a + b);
    std::complex<double> rhs = phase_to_complex(a) * phase_to_complex(b);
    CHECK(std::abs(lhs - rhs) <= 1e-14);
    CHECK(std::abs(std::abs(phase_to_complex(a)) - 1.0) <= 1e-15);
  }
}

TEST_CASE("phase string round trip") {
  CHECK(PhaseExponent(1, 6).str() == "1/6");
  CHECK(PhaseExponent::parse("1/6") == PhaseExponent(1, 6));
  CHECK(PhaseExponent::parse("-1/4") == PhaseExponent(3, 4));
  CHECK(PhaseExponent::parse("0") == PhaseExponent());
  CHECK_THROWS_AS(PhaseExponent::parse("x"), ParseError);
}
