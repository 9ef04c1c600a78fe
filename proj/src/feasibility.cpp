#include "varmax/feasibility.hpp"

#include "varmax/bounds.hpp"
#include "varmax/oracle.hpp"

#include <algorithm>
#include <vector>

namespace varmax {

RoundedValue RoundedValue::parse(std::string_view literal,
                                 std::optional<int> decimals_override,
                                 bool exact) {
    RoundedValue out;
    out.literal = std::string(literal);
    out.value = parse_decimal(literal);
    out.decimals = decimals_override.value_or(infer_decimals(literal));
    if (out.decimals < 0) throw ParseError("negative decimal count");
    if (out.decimals > 1000000) throw ParseError("unreasonable decimal count");
    out.exact = exact;
    return out;
}

RoundedValue RoundedValue::exact_value(Rational value) {
    RoundedValue out;
    out.literal = to_decimal_string(value);
    out.value = std::move(value);
    out.decimals = 0;
    out.exact = true;
    return out;
}

Rational RoundedValue::half_width() const {
    if (exact) return Rational(0);
    return make_rational(5, pow10(static_cast<unsigned>(decimals) + 1));
}

Interval RoundedValue::window() const {
    Rational h = half_width();
    return {value - h, value + h};
}

namespace {

BigInt ceil_int(const Rational& r) { return -floor_int(-r); }

// True when `x` rounded at the value's precision reproduces its literal.
bool rounds_back(const Rational& x, const RoundedValue& reported) {
    return round_decimal_literal(x, reported.decimals) ==
           round_decimal_literal(reported.value, reported.decimals);
}

struct Candidate {
    Rational mean;
    Rational value;  // attainable max population variance at this mean
};

// Window endpoints plus the breakpoints of the piecewise objective
// (means where n*c' crosses an integer), ascending and deduplicated.
std::vector<Rational> mean_candidates(std::int64_t n, const Interval& clip,
                                      const Rational& m, const Rational& M) {
    std::vector<Rational> out;
    out.push_back(clip.lower);
    if (M > m) {
        Rational w = M - m;
        Rational lo_unit = (clip.lower - m) / w * Rational(n);
        Rational hi_unit = (clip.upper - m) / w * Rational(n);
        for (BigInt j = ceil_int(lo_unit); j <= floor_int(hi_unit); ++j) {
            out.push_back(m + w * make_rational(j, BigInt(n)));
        }
    }
    out.push_back(clip.upper);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Rational pop_max_at(std::int64_t n, const Rational& c, const Rational& m,
                    const Rational& M) {
    return max_variance(ProblemSpec(n, c, BoundsSpec(m, M)));
}

// Shrink `extremal` toward its own mean so the population variance lands
// within 1e-18 of `target` (exactly, when target equals the extremal
// variance). Preserves the mean; shrinking is the one analytic step beyond
// the closed form: the feasible set is convex, so every variance in
// [0, max] is realizable this way.
Dataset shrink_to_variance(const Dataset& extremal, const Rational& center,
                           const Rational& extremal_variance,
                           const Rational& target) {
    Rational factor;
    if (extremal_variance == 0 || target == 0) {
        factor = 0;
    } else if (target == extremal_variance) {
        factor = 1;
    } else {
        const Rational tol = make_rational(1, pow10(18));
        Rational lo(0), hi(1);
        for (int iter = 0; iter < 256; ++iter) {
            Rational mid = (lo + hi) / 2;
            Rational v = mid * mid * extremal_variance;
            if (v < target) lo = mid; else hi = mid;
            Rational err = v - target;
            if (err < 0) err = -err;
            if (err <= tol) { factor = mid; break; }
            factor = mid;
        }
    }
    std::vector<Rational> values;
    values.reserve(extremal.values().size());
    for (const auto& x : extremal.values())
        values.push_back(center + factor * (x - center));
    return Dataset(std::move(values)).sorted_ascending();
}

// --- AttainedExtremes helpers -------------------------------------------

// Means for which a dataset with both extremes pinned exists.
Interval attained_mean_range(std::int64_t n, const Rational& m, const Rational& M) {
    Rational w = M - m;
    return {m + w / Rational(n), M - w / Rational(n)};
}

// Minimum population variance at mean c with one value at each extreme:
// the free values all sit at the residual mean.
Rational attained_vmin(std::int64_t n, const Rational& c, const Rational& m,
                       const Rational& M) {
    if (n == 2) {
        Rational h = (M - m) / 2;
        return h * h;
    }
    Rational r = (Rational(n) * c - m - M) / Rational(n - 2);
    Rational dm = m - c, dM = M - c, dr = r - c;
    return (dm * dm + Rational(n - 2) * dr * dr + dM * dM) / Rational(n);
}

Rational attained_vmax(std::int64_t n, const Rational& c, const Rational& m,
                       const Rational& M) {
    ProblemSpec spec(n, c, BoundsSpec(m, M, BoundsSemantics::AttainedExtremes));
    return attained_vertex_max(spec).best_variance;
}

// Unsorted slot order with the extremes first; combined coordinate-wise
// with the attained argmax so the pins stay in place along the path.
Dataset attained_min_dataset(std::int64_t n, const Rational& c, const Rational& m,
                             const Rational& M) {
    std::vector<Rational> values;
    values.reserve(static_cast<size_t>(n));
    values.push_back(m);
    if (n > 2) {
        Rational r = (Rational(n) * c - m - M) / Rational(n - 2);
        for (std::int64_t i = 0; i < n - 2; ++i) values.push_back(r);
    }
    values.push_back(M);
    return Dataset(std::move(values));
}

// Variance along the straight path between two equal-mean datasets is
// quadratic in t; bisect for a point within 1e-18 of target, given
// var(a) <= target <= var(b).
Dataset blend_to_variance(const Dataset& a, const Dataset& b, const Rational& target) {
    Rational va = a.population_variance();
    Rational vb = b.population_variance();
    if (target == va) return a.sorted_ascending();
    if (target == vb) return b.sorted_ascending();

    auto blend = [&](const Rational& t) {
        std::vector<Rational> values;
        values.reserve(a.values().size());
        for (size_t i = 0; i < a.values().size(); ++i)
            values.push_back(a.values()[i] + t * (b.values()[i] - a.values()[i]));
        return Dataset(std::move(values));
    };

    const Rational tol = make_rational(1, pow10(18));
    Rational lo(0), hi(1);
    Dataset best = blend(Rational(1, 2));
    for (int iter = 0; iter < 256; ++iter) {
        Rational mid = (lo + hi) / 2;
        Dataset candidate = blend(mid);
        Rational v = candidate.population_variance();
        if (v < target) lo = mid; else hi = mid;
        Rational err = v - target;
        if (err < 0) err = -err;
        best = std::move(candidate);
        if (err <= tol) break;
    }
    return best.sorted_ascending();
}

FeasibilityVerdict invalid(const ReportedStats& stats, std::string message) {
    FeasibilityVerdict v;
    v.status = FeasibilityStatus::InvalidInput;
    v.message = std::move(message);
    Rational sd_lo = stats.sd.window().lower;
    if (sd_lo < 0) sd_lo = 0;
    Rational sd_hi = stats.sd.window().upper;
    if (sd_hi >= 0)
        v.reported_variance_window = {sd_lo * sd_lo, sd_hi * sd_hi};
    return v;
}

}  // namespace

MeanWindowMax max_over_mean_window(std::int64_t n, const Interval& window,
                                   const Rational& m, const Rational& M) {
    if (n < 1) throw std::domain_error("dataset length must be at least 1");
    if (m > M) throw std::domain_error("bounds with lower > upper");
    Interval clip = window.clipped_to({m, M});
    if (clip.empty()) throw WindowError("mean window does not intersect the bounds");
    if (m == M) return {Rational(0), m};

    MeanWindowMax best{Rational(-1), clip.lower};
    for (const auto& c : mean_candidates(n, clip, m, M)) {
        Rational value = pop_max_at(n, c, m, M);
        if (value > best.value) best = {value, c};  // ties keep the smaller mean
    }
    return best;
}

FeasibilityVerdict check(const ReportedStats& stats) {
    if (stats.n < 1) return invalid(stats, "n must be at least 1");
    if (stats.min > stats.max) return invalid(stats, "min exceeds max");
    if (stats.sd.value < 0) return invalid(stats, "sd must be nonnegative");
    if (stats.convention == Convention::Sample && stats.n < 2)
        return invalid(stats, "sample convention needs n >= 2");

    const Rational& m = stats.min;
    const Rational& M = stats.max;
    Interval mean_clip = stats.mean.window().clipped_to({m, M});
    if (mean_clip.empty())
        return invalid(stats, "mean window does not intersect [min, max]");

    // Reported-convention variance window; comparisons run on the
    // population scale.
    Rational sd_lo = stats.sd.window().lower;
    if (sd_lo < 0) sd_lo = 0;
    Rational sd_hi = stats.sd.window().upper;
    Interval rep_win{sd_lo * sd_lo, sd_hi * sd_hi};
    const bool sample = stats.convention == Convention::Sample;
    const Rational to_pop =
        sample ? Rational(stats.n - 1, stats.n) : Rational(1);
    const Rational to_reported = 1 / to_pop;
    Interval pop_win{rep_win.lower * to_pop, rep_win.upper * to_pop};
    Rational pop_point = stats.sd.value * stats.sd.value * to_pop;

    FeasibilityVerdict v;
    v.reported_variance_window = rep_win;
    v.min_required_variance = Rational(0);

    if (stats.semantics == BoundsSemantics::BoundsOnly) {
        MeanWindowMax mw = max_over_mean_window(stats.n, mean_clip, m, M);
        v.max_attainable_variance = mw.value * to_reported;
        v.margin = v.max_attainable_variance - rep_win.lower;
        if (pop_win.lower > mw.value) {
            v.status = FeasibilityStatus::Infeasible;
            return v;
        }
        v.status = FeasibilityStatus::Feasible;

        // Variance target inside both the window and [0, max].
        Rational target;
        if (pop_win.lower == pop_win.upper) target = pop_win.lower;
        else if (pop_point <= mw.value) target = pop_point;
        else if (mw.value > pop_win.lower) target = (pop_win.lower + mw.value) / 2;
        else target = mw.value;

        // Witness mean preference: the literal value itself, then the
        // smallest candidate whose rounded rendering reproduces the literal
        // (every window point does except the upper endpoint, which rounds
        // away under half-up). When only that endpoint attains the target,
        // back the target off the endpoint maximum and walk inward; the
        // objective is continuous, so values just under it are reached
        // arbitrarily close by.
        std::optional<Rational> chosen;
        if (mean_clip.contains(stats.mean.value) &&
            pop_max_at(stats.n, stats.mean.value, m, M) >= target)
            chosen = stats.mean.value;
        if (!chosen) {
            for (const auto& c : mean_candidates(stats.n, mean_clip, m, M)) {
                if (pop_max_at(stats.n, c, m, M) < target) continue;
                if (rounds_back(c, stats.mean)) { chosen = c; break; }
            }
        }
        if (!chosen) {
            Rational capped = std::min(mw.value, pop_win.upper);
            if (capped > pop_win.lower) {
                Rational softer = (pop_win.lower + capped) / 2;
                if (softer < target) target = softer;
                Rational offset = mean_clip.upper - mean_clip.lower;
                for (int k = 0; k < 200 && !chosen; ++k) {
                    offset = offset / 2;
                    Rational c = mw.argmean - offset;
                    if (c < mean_clip.lower) continue;
                    if (!rounds_back(c, stats.mean)) continue;
                    if (pop_max_at(stats.n, c, m, M) >= target) chosen = c;
                }
            }
        }
        if (!chosen) chosen = mw.argmean;  // feasibility touches only the endpoint

        ProblemSpec spec(stats.n, *chosen, BoundsSpec(m, M));
        auto [shape, extremal] = witness_dataset(spec);
        v.witness = shrink_to_variance(extremal, *chosen, max_variance(spec), target);
        return v;
    }

    // AttainedExtremes.
    if (m == M) {
        v.max_attainable_variance = Rational(0);
        v.margin = -rep_win.lower;
        if (!mean_clip.contains(m) || pop_win.lower > 0) {
            v.status = FeasibilityStatus::Infeasible;
            v.message = "degenerate bounds force a constant dataset";
            return v;
        }
        v.status = FeasibilityStatus::Feasible;
        v.witness = Dataset(std::vector<Rational>(static_cast<size_t>(stats.n), m));
        return v;
    }
    if (stats.n < 2) {
        v.status = FeasibilityStatus::Infeasible;
        v.max_attainable_variance = Rational(-1);
        v.margin = v.max_attainable_variance - rep_win.lower;
        v.message = "one value cannot attain two distinct extremes";
        return v;
    }

    Interval clip = mean_clip.clipped_to(attained_mean_range(stats.n, m, M));
    if (clip.empty()) {
        v.status = FeasibilityStatus::Infeasible;
        v.max_attainable_variance = Rational(-1);
        v.margin = v.max_attainable_variance - rep_win.lower;
        v.message = "no mean in the window lets both extremes be attained";
        return v;
    }

    std::vector<Rational> candidates = mean_candidates(stats.n, clip, m, M);
    Rational mid_mean = (m + M) / 2;
    if (mid_mean < clip.lower) mid_mean = clip.lower;
    if (mid_mean > clip.upper) mid_mean = clip.upper;
    candidates.push_back(mid_mean);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()),
                     candidates.end());

    Rational max_max(-1), max_argmean = clip.lower;
    for (const auto& c : candidates) {
        Rational value = attained_vmax(stats.n, c, m, M);
        if (value > max_max) { max_max = value; max_argmean = c; }
    }
    // vmin is convex in the mean with its minimum at (m + M)/2.
    Rational min_min = attained_vmin(stats.n, mid_mean, m, M);

    v.max_attainable_variance = max_max * to_reported;
    v.min_required_variance = min_min * to_reported;
    v.margin = v.max_attainable_variance - rep_win.lower;
    if (pop_win.lower > max_max || pop_win.upper < min_min) {
        v.status = FeasibilityStatus::Infeasible;
        return v;
    }
    v.status = FeasibilityStatus::Feasible;

    // A mean whose own attainable range [vmin, vmax] meets the window.
    auto intersection_at = [&](const Rational& c) -> std::optional<Interval> {
        Rational lo = attained_vmin(stats.n, c, m, M);
        Rational hi = attained_vmax(stats.n, c, m, M);
        Interval cut{std::max(lo, pop_win.lower), std::min(hi, pop_win.upper)};
        if (cut.empty()) return std::nullopt;
        return cut;
    };

    Rational chosen = max_argmean;
    std::optional<Interval> cut;
    if (clip.contains(stats.mean.value)) {
        if (auto got = intersection_at(stats.mean.value)) {
            chosen = stats.mean.value;
            cut = got;
        }
    }
    for (const auto& c : candidates) {
        if (cut && rounds_back(chosen, stats.mean)) break;
        auto got = intersection_at(c);
        if (!got) continue;
        if (!cut) { chosen = c; cut = got; }
        if (rounds_back(c, stats.mean)) { chosen = c; cut = got; break; }
    }
    if (!cut) {
        // Window met only between candidates: walk the mean toward the
        // vmax maximizer until the ranges overlap.
        Rational lo = mid_mean, hi = max_argmean;
        for (int iter = 0; iter < 200 && !cut; ++iter) {
            Rational c = (lo + hi) / 2;
            auto got = intersection_at(c);
            if (got) { chosen = c; cut = got; break; }
            if (attained_vmax(stats.n, c, m, M) < pop_win.lower) lo = c; else hi = c;
        }
        if (!cut) { chosen = max_argmean; cut = intersection_at(chosen); }
    }
    if (cut) {
        Rational target = pop_point;
        if (target < cut->lower || target > cut->upper)
            target = (cut->lower + cut->upper) / 2;
        ProblemSpec spec(stats.n, chosen,
                         BoundsSpec(m, M, BoundsSemantics::AttainedExtremes));
        Dataset low = attained_min_dataset(stats.n, chosen, m, M);
        Dataset high = attained_vertex_max(spec).argmax;
        v.witness = blend_to_variance(low, high, target);
    } else {
        // Point variance window met only at an irrational mean.
        v.message = "feasible, but no rational mean realizes the exact window";
    }
    return v;
}

FeasibilityVerdict cv_check(const RoundedValue& mean, const RoundedValue& cv) {
    Interval W = mean.window();
    if (W.lower <= 0 || W.upper > 1)
        throw std::domain_error("mean window must lie inside (0, 1]");

    FeasibilityVerdict v;
    if (cv.value < 0) {
        v.status = FeasibilityStatus::InvalidInput;
        v.message = "cv must be nonnegative";
        return v;
    }
    Rational cv_lo = cv.window().lower;
    if (cv_lo < 0) cv_lo = 0;
    Rational cv_hi = cv.window().upper;
    v.reported_variance_window = {cv_lo * cv_lo, cv_hi * cv_hi};
    v.min_required_variance = Rational(0);

    // 1/c - 1 decreases in c, so the window maximum sits at the lower end.
    Rational bound = cv_squared_max(W.lower);
    v.max_attainable_variance = bound;
    v.margin = bound - cv_lo * cv_lo;
    if (cv_lo * cv_lo > bound) {
        v.status = FeasibilityStatus::Infeasible;
        return v;
    }
    v.status = FeasibilityStatus::Feasible;

    Rational cv_point = cv.value * cv.value;
    Rational center = cv_point <= cv_squared_max(mean.value) ? mean.value : W.lower;
    Rational bound_here = cv_squared_max(center);
    Rational target;  // squared CV
    if (cv_point <= bound_here) target = cv_point;
    else if (bound_here > cv_lo * cv_lo) target = (cv_lo * cv_lo + bound_here) / 2;
    else target = bound_here;

    // Length with the target attainable: denominators of the mean always
    // reach the full bound (the fractional part vanishes there); prefer a
    // short dataset when one suffices.
    std::int64_t length = 0;
    if (target == bound_here) {
        length = static_cast<std::int64_t>(denominator(center));
    } else {
        for (std::int64_t n = 1; n <= 512; ++n) {
            if (max_variance_unit(n, center) >= target * center * center) {
                length = n;
                break;
            }
        }
        if (length == 0) length = static_cast<std::int64_t>(denominator(center));
    }

    ProblemSpec spec(length, center, BoundsSpec(Rational(0), Rational(1)));
    auto [shape, extremal] = witness_dataset(spec);
    v.witness = shrink_to_variance(extremal, center, max_variance(spec),
                                   target * center * center);
    return v;
}

}  // namespace varmax
