#pragma once

#include "varmax/types.hpp"

#include <optional>
#include <string>

namespace varmax {

// A reported decimal with its rounding window: the closed interval of true
// values consistent with the literal at the given precision (half-up,
// total width 10^-decimals). The `exact` flag collapses the window to a
// point.
struct RoundedValue {
    std::string literal;
    Rational value;
    int decimals = 0;
    bool exact = false;

    static RoundedValue parse(std::string_view literal,
                              std::optional<int> decimals_override = std::nullopt,
                              bool exact = false);
    static RoundedValue exact_value(Rational value);

    Rational half_width() const;
    Interval window() const;
};

enum class Convention { Population, Sample };

// A claimed (n, mean, sd, min, max) tuple. Plain aggregate; check()
// reports violations as InvalidInput verdicts instead of throwing.
struct ReportedStats {
    std::int64_t n = 0;
    RoundedValue mean;
    RoundedValue sd;
    Rational min;
    Rational max;
    Convention convention = Convention::Population;
    BoundsSemantics semantics = BoundsSemantics::BoundsOnly;
};

enum class FeasibilityStatus { Feasible, Infeasible, InvalidInput };

struct FeasibilityVerdict {
    FeasibilityStatus status = FeasibilityStatus::InvalidInput;
    // Max attainable variance over the clipped mean window, in the
    // reported convention.
    Rational max_attainable_variance;
    // Smallest attainable variance under the semantics (0 for BoundsOnly;
    // the pinned-extremes minimum for AttainedExtremes). Infeasible holds a
    // numeric certificate: window.lower > max_attainable or
    // window.upper < min_required.
    Rational min_required_variance;
    Interval reported_variance_window{Rational(0), Rational(0)};
    std::optional<Dataset> witness;  // present iff Feasible
    Rational margin;  // max_attainable - reported window lower end
    std::string message;
};

struct MeanWindowMax {
    Rational value;    // max population variance over the window
    Rational argmean;  // smallest attaining mean
};

// Exact maximum of max_variance(n, c, m, M) over c in window ∩ [m, M].
// The unit-scale objective is piecewise quadratic in c with breakpoints at
// multiples of 1/n and convex on each piece, so only window endpoints and
// breakpoints are candidates. Throws WindowError when the clipped window
// is empty.
MeanWindowMax max_over_mean_window(std::int64_t n, const Interval& window,
                                   const Rational& m, const Rational& M);

// Decides whether the reported statistics are jointly achievable by any
// real dataset, producing a witness or a numeric certificate.
FeasibilityVerdict check(const ReportedStats& stats);

// Coefficient-of-variation feasibility on the unit scale: feasible iff the
// squared CV window lower end is at most max over the mean window of
// 1/mean - 1. Mean window must lie inside (0, 1] (std::domain_error
// otherwise). The verdict's variance fields carry squared-CV values.
FeasibilityVerdict cv_check(const RoundedValue& mean, const RoundedValue& cv);

}  // namespace varmax
