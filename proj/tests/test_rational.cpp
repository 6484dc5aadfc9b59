#include <doctest.h>

#include <random>
#include <stdexcept>

#include <metamorph/rational.hpp>

#include "oracles.hpp"

using metamorph::BigInt;
using metamorph::Rational;

TEST_CASE("rationals are stored reduced with positive denominator") {
  CHECK(Rational(625, 1000) == Rational(5, 8));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(-6, -9) == Rational(2, 3));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(12, 4).num() == 3);
  CHECK(Rational(12, 4).den() == 1);
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("rational arithmetic stays exact") {
  Rational tenth(1, 10);
  Rational half(1, 2);
  CHECK(tenth + half == Rational(3, 5));
  CHECK(half - tenth == Rational(2, 5));
  CHECK(tenth * half == Rational(1, 20));
  CHECK(tenth / half == Rational(1, 5));
  CHECK(-tenth == Rational(-1, 10));
  CHECK_THROWS_AS(half / Rational(0), std::invalid_argument);

  // 30 digits deep: the weights of a long conversion stay representable.
  Rational w(1, 10);
  for (int i = 0; i < 29; ++i) w = w / Rational(10);
  CHECK(w.den() == pow(BigInt(10), 30));
  CHECK(w * Rational(pow(BigInt(10), 30)) == Rational(1));
}

TEST_CASE("floor_div floors, also below zero") {
  CHECK(metamorph::floor_div(Rational(625, 1000), Rational(1, 2)) == 1);
  CHECK(metamorph::floor_div(Rational(1, 10), Rational(1, 8)) == 0);
  CHECK(metamorph::floor_div(Rational(1, 3), Rational(1, 3)) == 1);
  CHECK(metamorph::floor_div(Rational(-1, 2), Rational(1, 3)) == -2);
  CHECK(metamorph::floor_div(Rational(7), Rational(2)) == 3);
  CHECK_THROWS_AS(metamorph::floor_div(Rational(1), Rational(0)), std::invalid_argument);
}

TEST_CASE("parse and print round-trip") {
  CHECK(metamorph::to_string(Rational(5, 8)) == "5/8");
  CHECK(metamorph::to_string(Rational(0)) == "0/1");
  CHECK(metamorph::to_string(Rational(-3, 4)) == "-3/4");
  CHECK(metamorph::parse_rational("5/8") == Rational(5, 8));
  CHECK(metamorph::parse_rational("625/1000") == Rational(5, 8));
  CHECK(metamorph::parse_rational("7") == Rational(7));
  CHECK(metamorph::parse_rational("-3/4") == Rational(-3, 4));
  CHECK_THROWS_AS(metamorph::parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(metamorph::parse_rational("x/y"), std::invalid_argument);
}

TEST_CASE("rational arithmetic agrees with an integer oracle") {
  // Small operands so every cross product fits comfortably in int64.
  std::mt19937_64 eng(20240917);
  auto pick = [&](long long lo, long long hi) {
    return lo + static_cast<long long>(eng() % static_cast<unsigned long long>(hi - lo + 1));
  };
  for (int round = 0; round < 4000; ++round) {
    long long a = pick(-50, 50), b = pick(1, 50), c = pick(-50, 50), d = pick(1, 50);
    Rational x(a, b), y(c, d);

    CHECK(x + y == Rational(a * d + c * b, b * d));
    CHECK(x - y == Rational(a * d - c * b, b * d));
    CHECK(x * y == Rational(a * c, b * d));
    if (c != 0) CHECK(x / y == Rational(a * d, b * c));
    CHECK((x < y) == (a * d < c * b));
    CHECK((x == y) == (a * d == c * b));
    if (c != 0) {
      long long n = a * d, m = b * c;
      if (m < 0) {
        n = -n;
        m = -m;
      }
      CHECK(metamorph::floor_div(x, y) == BigInt(oracles::floordiv(n, m)));
    }
  }
}
