#include "varmax/rational.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace varmax;

TEST_CASE("decimal parsing is exact") {
    CHECK(parse_decimal("0.1") == Rational(1, 10));
    CHECK(parse_decimal("0.10") == Rational(1, 10));
    CHECK(parse_decimal("2.8") == Rational(14, 5));
    CHECK(parse_decimal("-3") == Rational(-3));
    CHECK(parse_decimal("+0.25") == Rational(1, 4));
    CHECK(parse_decimal(".5") == Rational(1, 2));
    CHECK(parse_decimal("2.5e-3") == Rational(1, 400));
    CHECK(parse_decimal("1e2") == Rational(100));
    CHECK(parse_decimal("1.5E3") == Rational(1500));
    CHECK(parse_decimal("0") == Rational(0));
}

TEST_CASE("bad literals are rejected") {
    CHECK_THROWS_AS(parse_decimal(""), ParseError);
    CHECK_THROWS_AS(parse_decimal("abc"), ParseError);
    CHECK_THROWS_AS(parse_decimal("1.2.3"), ParseError);
    CHECK_THROWS_AS(parse_decimal("1e"), ParseError);
    CHECK_THROWS_AS(parse_decimal("."), ParseError);
    CHECK_THROWS_AS(parse_decimal("--1"), ParseError);
    CHECK_THROWS_AS(parse_number("1/0"), ParseError);
}

TEST_CASE("fraction form parses") {
    CHECK(parse_number("3/12") == Rational(1, 4));
    CHECK(parse_number("-2/4") == Rational(-1, 2));
    CHECK(parse_number("0.5") == Rational(1, 2));
}

TEST_CASE("floor and fractional part") {
    CHECK(floor_int(Rational(7, 3)) == 2);
    CHECK(floor_int(Rational(-7, 3)) == -3);
    CHECK(floor_int(Rational(4)) == 4);

    // frac_part(5 * 1/10) = 1/2; integers have no fractional part.
    CHECK(frac_part(Rational(5) * Rational(1, 10)) == Rational(1, 2));
    CHECK(frac_part(Rational(3)) == Rational(0));
    CHECK(frac_part(Rational(7, 3)) == Rational(1, 3));
    CHECK(frac_part(Rational(-1, 3)) == Rational(2, 3));
}

TEST_CASE("doubles rationalize exactly") {
    CHECK(rational_from_double(0.5) == Rational(1, 2));
    CHECK(rational_from_double(-0.25) == Rational(-1, 4));
    CHECK(rational_from_double(3.0) == Rational(3));
    CHECK(rational_from_double(0.0) == Rational(0));

    // Binary 0.1 is not 1/10; the conversion must preserve that.
    Rational tenth_double = rational_from_double(0.1);
    CHECK(tenth_double != Rational(1, 10));
    Rational err = tenth_double - Rational(1, 10);
    if (err < 0) err = -err;
    CHECK(err < Rational(1, 1000000000000000));
}

TEST_CASE("rendering") {
    CHECK(to_fraction_string(Rational(1, 25)) == "1/25");
    CHECK(to_fraction_string(Rational(-3)) == "-3/1");
    CHECK(to_decimal_string(Rational(1, 25)) == "0.04");
    CHECK(to_decimal_string(Rational(0)) == "0");
    CHECK(to_decimal_string(Rational(14, 5)) == "2.8");
    CHECK(to_decimal_string(Rational(1, 3), 6) == "0.333333");
    CHECK(to_decimal_string(Rational(-1, 2)) == "-0.5");

    CHECK(to_significant_string(Rational(1, 6), 12) == "0.166666666667");
    CHECK(to_significant_string(Rational(1, 12), 12) == "0.0833333333333");
    CHECK(to_significant_string(Rational(1, 4), 12) == "0.25");
    CHECK(to_significant_string(Rational(0), 12) == "0");
    CHECK(to_significant_string(Rational(12345), 3) == "12300");
}

TEST_CASE("fixed literals round half away from zero") {
    CHECK(round_decimal_literal(Rational(1, 10), 2) == "0.10");
    CHECK(round_decimal_literal(Rational(21, 200), 2) == "0.11");   // 0.105 up
    CHECK(round_decimal_literal(Rational(19, 200), 2) == "0.10");   // 0.095 up
    CHECK(round_decimal_literal(Rational(-21, 200), 2) == "-0.11");
    CHECK(round_decimal_literal(Rational(3), 0) == "3");
    CHECK(round_decimal_literal(Rational(2349, 10000), 2) == "0.23");
}

TEST_CASE("decimal precision inference") {
    CHECK(infer_decimals("0.10") == 2);
    CHECK(infer_decimals("3") == 0);
    CHECK(infer_decimals("0.5") == 1);
    CHECK(infer_decimals("2.5e-3") == 4);
    CHECK(infer_decimals("1.5e3") == 0);
    CHECK(infer_decimals("-0.123") == 3);
}

TEST_CASE("printed decimals re-parse within 1e-12") {
    std::mt19937_64 rng(12345);
    Rational tolerance(1, pow10(12));
    for (int i = 0; i < 2000; ++i) {
        std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 9999);
        std::int64_t num = static_cast<std::int64_t>(rng() % 20001) - 10000;
        Rational r(num, den);
        Rational back = parse_decimal(to_decimal_string(r));
        Rational err = back - r;
        if (err < 0) err = -err;
        REQUIRE(err < tolerance);
    }
}
