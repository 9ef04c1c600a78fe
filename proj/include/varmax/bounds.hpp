#pragma once

#include "varmax/types.hpp"

#include <utility>

namespace varmax {

// Sharp maximum population variance of n values in [0, 1] with mean c:
//   c(1 - c) - a(1 - a)/n,  a = frac(n c).
// Throws std::domain_error for c outside [0, 1] or n < 1.
Rational max_variance_unit(std::int64_t n, const Rational& c);

// Same bound rescaled to [m, M]: (M - m)^2 * max_variance_unit with the
// unit mean. Requires BoundsOnly semantics.
Rational max_variance(const ProblemSpec& spec);

// Classical bound (M - c)(c - m); not sharp for fixed n.
Rational bhatia_davis(const Rational& c, const Rational& m, const Rational& M);

struct Envelope {
    Rational lo;  // c(1-c) - 1/(4n)
    Rational hi;  // c(1-c)
};

// Guaranteed band containing max_variance_unit(n, c).
Envelope envelope(std::int64_t n, const Rational& c);

// A dataset attaining max_variance(spec), sorted ascending, together with
// its shape. Mean is exactly spec.mean.
std::pair<ExtremalStructure, Dataset> witness_dataset(const ProblemSpec& spec);

struct SumSquaresBound {
    Rational lhs;  // sum of squares
    Rational rhs;  // sum - a(1 - a), a = frac(sum)
    bool holds;
};

// For values in [0, 1]: sum(x^2) <= sum(x) - a(1 - a) with a the
// fractional part of sum(x). `holds` is true for every valid input; the
// struct makes the inequality directly assertable.
SumSquaresBound sum_squares_bound(const Dataset& data);

// Largest possible squared coefficient of variation for unit-scale data
// with the given mean, over all dataset lengths: 1/mean - 1. The CV bound
// itself is the square root, taken only in display code.
Rational cv_squared_max(const Rational& mean);

// Floating-point entry points. Inputs are rationalized exactly (every
// finite double is rational), so the result is exact for the dataset the
// caller actually described -- which is usually not the decimal they had
// in mind: 0.1 as a double is not 1/10, and the fractional part of n*c is
// discontinuous in c. Treat results as carrying a presentation tolerance
// of 1e-12 and prefer the decimal-string path for reported statistics.
Rational max_variance_unit(std::int64_t n, double c);
Rational max_variance(std::int64_t n, double mean, double min, double max);
Rational bhatia_davis(double c, double m, double M);

}  // namespace varmax
