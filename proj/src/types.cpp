#include "varmax/types.hpp"

#include <algorithm>

namespace varmax {

BoundsSpec::BoundsSpec(Rational m, Rational M, BoundsSemantics s)
    : lower(std::move(m)), upper(std::move(M)), semantics(s) {
    if (lower > upper) throw std::domain_error("bounds with lower > upper");
}

ProblemSpec::ProblemSpec(std::int64_t n_, Rational mean_, BoundsSpec bounds_)
    : n(n_), mean(std::move(mean_)), bounds(std::move(bounds_)) {
    if (n < 1) throw std::domain_error("dataset length must be at least 1");
    if (mean < bounds.lower || mean > bounds.upper)
        throw InfeasibleError("mean outside bounds: no dataset exists");
}

Rational ProblemSpec::unit_mean() const {
    if (bounds.degenerate()) return Rational(0);
    return (mean - bounds.lower) / bounds.width();
}

Rational Dataset::sum() const {
    Rational s(0);
    for (const auto& v : values_) s += v;
    return s;
}

Rational Dataset::sum_squares() const {
    Rational s(0);
    for (const auto& v : values_) s += v * v;
    return s;
}

Rational Dataset::mean() const {
    if (values_.empty()) throw std::domain_error("mean of empty dataset");
    return sum() / Rational(size());
}

Rational Dataset::population_variance() const {
    if (values_.empty()) throw std::domain_error("variance of empty dataset");
    Rational m = mean();
    return sum_squares() / Rational(size()) - m * m;
}

Rational Dataset::sample_variance() const {
    if (size() < 2) throw std::domain_error("sample variance needs n >= 2");
    return population_variance() * Rational(size()) / Rational(size() - 1);
}

Rational Dataset::min_value() const {
    if (values_.empty()) throw std::domain_error("min of empty dataset");
    return *std::min_element(values_.begin(), values_.end());
}

Rational Dataset::max_value() const {
    if (values_.empty()) throw std::domain_error("max of empty dataset");
    return *std::max_element(values_.begin(), values_.end());
}

Dataset Dataset::sorted_ascending() const {
    std::vector<Rational> v = values_;
    std::sort(v.begin(), v.end());
    return Dataset(std::move(v));
}

std::vector<double> Dataset::to_doubles() const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (const auto& v : values_) out.push_back(to_double(v));
    return out;
}

}  // namespace varmax
