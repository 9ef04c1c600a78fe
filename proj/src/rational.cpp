#include "varmax/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace varmax {

Rational make_rational(BigInt num, BigInt den) {
    if (den == 0) throw ParseError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(num, den);
}

BigInt pow10(unsigned exponent) {
    return boost::multiprecision::pow(BigInt(10), exponent);
}

BigInt floor_int(const Rational& r) {
    BigInt q = numerator(r) / denominator(r);  // truncates toward zero
    if (numerator(r) < 0 && q * denominator(r) != numerator(r)) --q;
    return q;
}

Rational frac_part(const Rational& r) {
    return r - Rational(floor_int(r));
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

Rational parse_decimal(std::string_view text) {
    std::string_view s = text;
    if (s.empty()) throw ParseError("empty number literal");

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    long exponent = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
        std::string_view exp = s.substr(epos + 1);
        s = s.substr(0, epos);
        bool exp_neg = false;
        if (!exp.empty() && (exp.front() == '+' || exp.front() == '-')) {
            exp_neg = exp.front() == '-';
            exp.remove_prefix(1);
        }
        if (!all_digits(exp) || exp.size() > 6)
            throw ParseError("bad exponent in number literal: " + std::string(text));
        exponent = std::strtol(std::string(exp).c_str(), nullptr, 10);
        if (exp_neg) exponent = -exponent;
    }

    std::string_view int_part = s;
    std::string_view frac_digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        int_part = s.substr(0, dot);
        frac_digits = s.substr(dot + 1);
    }
    if (int_part.empty() && frac_digits.empty())
        throw ParseError("no digits in number literal: " + std::string(text));
    if (!int_part.empty() && !all_digits(int_part))
        throw ParseError("bad number literal: " + std::string(text));
    if (!frac_digits.empty() && !all_digits(frac_digits))
        throw ParseError("bad number literal: " + std::string(text));

    BigInt mantissa(0);
    for (char c : int_part) mantissa = mantissa * 10 + (c - '0');
    for (char c : frac_digits) mantissa = mantissa * 10 + (c - '0');
    if (negative) mantissa = -mantissa;

    long scale = exponent - static_cast<long>(frac_digits.size());
    if (scale >= 0) return Rational(mantissa * pow10(static_cast<unsigned>(scale)));
    return make_rational(mantissa, pow10(static_cast<unsigned>(-scale)));
}

Rational parse_number(std::string_view text) {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::string_view num = text.substr(0, slash);
        std::string_view den = text.substr(slash + 1);
        Rational n = parse_decimal(num);
        Rational d = parse_decimal(den);
        if (denominator(n) != 1 || denominator(d) != 1)
            throw ParseError("fraction parts must be integers: " + std::string(text));
        if (d == 0) throw ParseError("fraction with zero denominator: " + std::string(text));
        return n / d;
    }
    return parse_decimal(text);
}

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw ParseError("non-finite double");
    if (x == 0.0) return Rational(0);
    int exp2 = 0;
    double mant = std::frexp(x, &exp2);  // x = mant * 2^exp2, |mant| in [0.5, 1)
    // 53 shifts make the mantissa integral.
    long long scaled = static_cast<long long>(std::ldexp(mant, 53));
    exp2 -= 53;
    BigInt num(scaled);
    if (exp2 >= 0) return Rational(num << exp2);
    return make_rational(num, BigInt(1) << (-exp2));
}

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

int infer_decimals(std::string_view literal) {
    std::string_view s = literal;
    long exponent = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
        exponent = std::strtol(std::string(s.substr(epos + 1)).c_str(), nullptr, 10);
        s = s.substr(0, epos);
    }
    long after_point = 0;
    if (auto dot = s.find('.'); dot != std::string_view::npos)
        after_point = static_cast<long>(s.size() - dot - 1);
    return static_cast<int>(std::max(0L, after_point - exponent));
}

std::string to_fraction_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

namespace {

// |r| rounded half away from zero to `decimals` places, as a scaled integer.
BigInt scaled_half_away(const Rational& r, int decimals) {
    BigInt scale = pow10(static_cast<unsigned>(decimals));
    BigInt num = numerator(r) * scale;
    if (num < 0) num = -num;
    const BigInt& den = denominator(r);
    return (2 * num + den) / (2 * den);  // floor((|r|*scale) + 1/2)
}

std::string fixed_from_scaled(bool negative, const BigInt& scaled, int decimals) {
    std::string digits = scaled.str();
    std::string out;
    if (decimals == 0) {
        out = digits;
    } else {
        if (static_cast<int>(digits.size()) <= decimals)
            digits.insert(0, static_cast<size_t>(decimals) - digits.size() + 1, '0');
        out = digits.substr(0, digits.size() - decimals) + "." +
              digits.substr(digits.size() - decimals);
    }
    if (negative && scaled != 0) out.insert(0, 1, '-');
    return out;
}

std::string trim_fraction(std::string s) {
    if (s.find('.') == std::string::npos) return s;
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
}

}  // namespace

std::string round_decimal_literal(const Rational& r, int decimals) {
    if (decimals < 0) throw std::domain_error("negative decimal count");
    return fixed_from_scaled(r < 0, scaled_half_away(r, decimals), decimals);
}

std::string to_decimal_string(const Rational& r, int frac_digits) {
    return trim_fraction(round_decimal_literal(r, frac_digits));
}

std::string to_significant_string(const Rational& r, int sig_digits) {
    if (sig_digits < 1) throw std::domain_error("need at least one significant digit");
    if (r == 0) return "0";
    Rational a = r < 0 ? Rational(-r) : r;
    int exp10 = 0;
    while (a >= 10) {
        a /= 10;
        ++exp10;
    }
    while (a < 1) {
        a *= 10;
        --exp10;
    }
    int frac = sig_digits - 1 - exp10;
    if (frac >= 0) return to_decimal_string(r, frac);
    // Round to a positive power of ten.
    BigInt unit = pow10(static_cast<unsigned>(-frac));
    BigInt num = numerator(r);
    bool negative = num < 0;
    if (negative) num = -num;
    BigInt den = denominator(r) * unit;
    BigInt scaled = (2 * num + den) / (2 * den) * unit;
    std::string out = scaled.str();
    if (negative && scaled != 0) out.insert(0, 1, '-');
    return out;
}

}  // namespace varmax
