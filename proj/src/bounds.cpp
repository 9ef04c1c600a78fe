#include "varmax/bounds.hpp"

namespace varmax {

Rational max_variance_unit(std::int64_t n, const Rational& c) {
    if (n < 1) throw std::domain_error("dataset length must be at least 1");
    if (c < 0 || c > 1) throw std::domain_error("unit-scale mean outside [0, 1]");
    Rational a = frac_part(Rational(n) * c);
    return c * (1 - c) - a * (1 - a) / Rational(n);
}

Rational max_variance(const ProblemSpec& spec) {
    if (spec.bounds.semantics != BoundsSemantics::BoundsOnly)
        throw SemanticsError("max_variance is defined for BoundsOnly semantics");
    if (spec.bounds.degenerate()) return Rational(0);
    Rational w = spec.bounds.width();
    return w * w * max_variance_unit(spec.n, spec.unit_mean());
}

Rational bhatia_davis(const Rational& c, const Rational& m, const Rational& M) {
    if (m > M) throw std::domain_error("bounds with lower > upper");
    if (c < m || c > M) throw std::domain_error("mean outside bounds");
    return (M - c) * (c - m);
}

Envelope envelope(std::int64_t n, const Rational& c) {
    if (n < 1) throw std::domain_error("dataset length must be at least 1");
    if (c < 0 || c > 1) throw std::domain_error("unit-scale mean outside [0, 1]");
    Rational hi = c * (1 - c);
    return {hi - Rational(1, 4 * n), hi};
}

std::pair<ExtremalStructure, Dataset> witness_dataset(const ProblemSpec& spec) {
    if (spec.bounds.semantics != BoundsSemantics::BoundsOnly)
        throw SemanticsError("witness_dataset is defined for BoundsOnly semantics");

    Rational target = Rational(spec.n) * spec.unit_mean();
    BigInt at_max_big = floor_int(target);
    Rational interior = target - Rational(at_max_big);
    auto at_max = static_cast<std::int64_t>(at_max_big);

    ExtremalStructure shape;
    shape.count_at_max = at_max;
    shape.has_interior = interior > 0;
    shape.interior_unit = interior;
    shape.count_at_min = spec.n - at_max - (shape.has_interior ? 1 : 0);

    const Rational& m = spec.bounds.lower;
    Rational w = spec.bounds.width();
    std::vector<Rational> values;
    values.reserve(static_cast<size_t>(spec.n));
    for (std::int64_t i = 0; i < shape.count_at_min; ++i) values.push_back(m);
    if (shape.has_interior) values.push_back(m + w * interior);
    for (std::int64_t i = 0; i < shape.count_at_max; ++i) values.push_back(spec.bounds.upper);

    return {shape, Dataset(std::move(values))};
}

SumSquaresBound sum_squares_bound(const Dataset& data) {
    for (const auto& v : data.values())
        if (v < 0 || v > 1) throw std::domain_error("values must lie in [0, 1]");
    Rational s = data.sum();
    Rational a = frac_part(s);
    SumSquaresBound out;
    out.lhs = data.sum_squares();
    out.rhs = s - a * (1 - a);
    out.holds = out.lhs <= out.rhs;
    return out;
}

Rational cv_squared_max(const Rational& mean) {
    if (mean <= 0 || mean > 1) throw std::domain_error("mean must lie in (0, 1]");
    return 1 / mean - 1;
}

Rational max_variance_unit(std::int64_t n, double c) {
    return max_variance_unit(n, rational_from_double(c));
}

Rational max_variance(std::int64_t n, double mean, double min, double max) {
    return max_variance(ProblemSpec(
        n, rational_from_double(mean),
        BoundsSpec(rational_from_double(min), rational_from_double(max))));
}

Rational bhatia_davis(double c, double m, double M) {
    return bhatia_davis(rational_from_double(c), rational_from_double(m),
                        rational_from_double(M));
}

}  // namespace varmax
