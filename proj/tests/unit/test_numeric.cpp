#include <doctest.h>

#include "support.hpp"

#include "error.hpp"
#include "limits.hpp"
#include "numeric.hpp"

using namespace fhl;

TEST_CASE("pow2 is exact for both signs") {
  CHECK(pow2(0) == 1);
  CHECK(pow2(10) == 1024);
  CHECK(pow2(-3) == Q(1, 8));
  CHECK(pow2_int(70) == Integer("1180591620717411303424"));
}

TEST_CASE("decimal literals parse to the decimal they print as") {
  CHECK(decimal_rational(0.3) == Q(3, 10));
  CHECK(decimal_rational(0.25) == Q(1, 4));
  CHECK(parse_rational("37/64") == Q(37, 64));
  CHECK(parse_rational("0.5") == Q(1, 2));
  CHECK(parse_rational("1e-3") == Q(1, 1000));
  CHECK(parse_rational("-4") == -4);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK(to_string(Q(6, 8)) == "3/4");
  CHECK(to_string(Rational(2)) == "2/1");
}

TEST_CASE("floor and ceil of 2^x are exact") {
  CHECK(floor_exp2(Q(6, 5)) == 2);   // 2^1.2 = 2.297
  CHECK(floor_exp2(Q(2, 5)) == 1);   // 2^0.4 = 1.32
  CHECK(ceil_exp2(Q(3, 2)) == 3);    // 2^1.5 = 2.828
  CHECK(floor_exp2(Q(9, 2)) == 22);  // 2^4.5 = 22.63
  CHECK(ceil_exp2(Q(9, 2)) == 23);
  CHECK(floor_exp2(Rational(5)) == 32);
  CHECK(ceil_exp2(Rational(5)) == 32);
  CHECK(floor_exp2(Rational(-1)) == 0);
  CHECK(ceil_exp2(Rational(-1)) == 1);
  CHECK(floor_exp2(Q(1000, 3)) == floor_of(exp2_rounded(Q(1000, 3), 2048)));
}

TEST_CASE("dyadic rationals stay canonical") {
  DyadicRational a(Integer(6), 3);  // 6/8 = 3/4
  CHECK(a.numerator() == 3);
  CHECK(a.exponent() == 2);
  DyadicRational b(Integer(1), 2);
  CHECK((a + b).to_rational() == 1);
  CHECK((a + b).exponent() == 0);
  CHECK((a * b).to_rational() == Q(3, 16));
  CHECK(b < a);
  CHECK(DyadicRational::from_rational(Q(5, 32)).exponent() == 5);
  CHECK_THROWS_AS(DyadicRational::from_rational(Q(1, 3)), Error);
}

TEST_CASE("scaled integers keep huge powers of two") {
  ScaledInt big = ScaledInt::pow2(100000000000LL);
  CHECK(big.exact_log2() == 100000000000LL);
  CHECK(big.log2() == doctest::Approx(1e11));
  ScaledInt three = ScaledInt::of(Integer(12));
  CHECK(three.mant == 3);
  CHECK(three.exp2 == 2);
  CHECK(three.value() == 12);
  CHECK_FALSE(three.exact_log2().has_value());
}

TEST_CASE("level cap is enforced") {
  CHECK(level_cap() >= 1);
  CHECK_NOTHROW(check_level(level_cap()));
  try {
    check_level(level_cap() + 1);
    FAIL("expected LevelCapExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::LevelCapExceeded);
  }
  CHECK_THROWS_AS(set_level_cap(63), Error);
}
