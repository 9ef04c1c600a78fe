#pragma once

#include "varmax/rational.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace varmax {

// The requested mean cannot be met inside the bounds (or, in attained
// mode, with the extremes pinned).
struct InfeasibleError : std::domain_error {
    using std::domain_error::domain_error;
};

// Operation called under the wrong BoundsSemantics.
struct SemanticsError : std::logic_error {
    using std::logic_error::logic_error;
};

// Grid search instance whose required sum is not representable on the grid.
struct GridError : std::domain_error {
    using std::domain_error::domain_error;
};

// Mean window and bounds do not intersect.
struct WindowError : std::domain_error {
    using std::domain_error::domain_error;
};

// BoundsOnly: m <= x_i <= M. AttainedExtremes: additionally min(x) = m
// and max(x) = M.
enum class BoundsSemantics { BoundsOnly, AttainedExtremes };

struct BoundsSpec {
    Rational lower;
    Rational upper;
    BoundsSemantics semantics = BoundsSemantics::BoundsOnly;

    BoundsSpec(Rational m, Rational M,
               BoundsSemantics s = BoundsSemantics::BoundsOnly);

    Rational width() const { return upper - lower; }
    bool degenerate() const { return lower == upper; }
};

// One constrained-maximization instance: n values in the bounds with the
// given mean.
struct ProblemSpec {
    std::int64_t n;
    Rational mean;
    BoundsSpec bounds;

    ProblemSpec(std::int64_t n, Rational mean, BoundsSpec bounds);

    // Mean rescaled to [0, 1]; 0 for degenerate bounds.
    Rational unit_mean() const;
};

// Shape of the variance maximizer: count_at_max values at the upper
// bound, count_at_min at the lower, and at most one interior value.
struct ExtremalStructure {
    std::int64_t count_at_max = 0;
    std::int64_t count_at_min = 0;
    bool has_interior = false;
    Rational interior_unit;  // in (0,1) when has_interior, else 0
};

class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::vector<Rational> values) : values_(std::move(values)) {}

    std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
    bool empty() const { return values_.empty(); }
    const std::vector<Rational>& values() const { return values_; }

    Rational sum() const;
    Rational sum_squares() const;
    Rational mean() const;                 // throws on empty
    Rational population_variance() const;  // sum(x^2)/n - mean^2
    Rational sample_variance() const;      // population * n/(n-1), n >= 2
    Rational min_value() const;
    Rational max_value() const;

    Dataset sorted_ascending() const;
    std::vector<double> to_doubles() const;

    bool operator==(const Dataset& other) const = default;

private:
    std::vector<Rational> values_;
};

// Closed rational interval.
struct Interval {
    Rational lower;
    Rational upper;

    bool empty() const { return lower > upper; }
    bool contains(const Rational& x) const { return lower <= x && x <= upper; }
    Interval clipped_to(const Interval& other) const {
        return {lower > other.lower ? lower : other.lower,
                upper < other.upper ? upper : other.upper};
    }
};

}  // namespace varmax
