#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace varmax {

// All core math runs on exact arbitrary-precision rationals. Values are
// stored in lowest terms with a positive denominator; floats appear only
// at the presentation edges.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// num/den with any sign pattern; throws ParseError on den == 0.
Rational make_rational(BigInt num, BigInt den);

BigInt pow10(unsigned exponent);

// Largest integer <= r.
BigInt floor_int(const Rational& r);

// r - floor(r), exact, in [0, 1).
Rational frac_part(const Rational& r);

// Parses a plain or scientific decimal literal ("0.1", "-3", "2.5e-3")
// to the exact rational it denotes.
Rational parse_decimal(std::string_view text);

// parse_decimal, or "p/q" fraction form.
Rational parse_number(std::string_view text);

// Exact value of a finite double (every finite double is rational).
Rational rational_from_double(double x);

double to_double(const Rational& r);

// Digits after the decimal point as written, adjusted for a scientific
// exponent and clamped at 0: "0.10" -> 2, "3" -> 0, "2.5e-3" -> 4.
int infer_decimals(std::string_view literal);

// "p/q", denominator always present ("3/1").
std::string to_fraction_string(const Rational& r);

// Fixed-point rendering rounded half away from zero to `frac_digits`
// places, trailing zeros trimmed. 14 digits keeps the re-parse error
// below 5e-15.
std::string to_decimal_string(const Rational& r, int frac_digits = 14);

// Rendering rounded to `sig_digits` significant digits (plain fixed
// notation, trimmed).
std::string to_significant_string(const Rational& r, int sig_digits);

// Fixed-point literal with exactly `decimals` places, half away from
// zero, zeros kept: round_decimal_literal(1/10, 2) == "0.10". This is the
// reporting model used when checking that a witness reproduces a rounded
// statistic.
std::string round_decimal_literal(const Rational& r, int decimals);

}  // namespace varmax
