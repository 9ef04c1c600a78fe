#include "varmax/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace varmax {

namespace {

// Unit-scale dataset with `ones` values at 1, optionally one interior
// value, the rest at 0, mapped onto [m, m + w] and sorted.
Dataset materialize(std::int64_t n, std::int64_t ones, const Rational& interior,
                    bool has_interior, const Rational& m, const Rational& w) {
    std::vector<Rational> values;
    values.reserve(static_cast<size_t>(n));
    std::int64_t zeros = n - ones - (has_interior ? 1 : 0);
    for (std::int64_t i = 0; i < zeros; ++i) values.push_back(m);
    if (has_interior) values.push_back(m + w * interior);
    for (std::int64_t i = 0; i < ones; ++i) values.push_back(m + w);
    return Dataset(std::move(values));
}

OracleResult constant_result(const ProblemSpec& spec, OracleMethod method) {
    std::vector<Rational> values(static_cast<size_t>(spec.n), spec.mean);
    OracleResult out;
    out.argmax = Dataset(std::move(values));
    out.best_variance = Rational(0);
    out.method = method;
    out.evaluations = 1;
    return out;
}

}  // namespace

OracleResult vertex_max(const ProblemSpec& spec) {
    if (spec.bounds.semantics != BoundsSemantics::BoundsOnly)
        throw SemanticsError("vertex_max is defined for BoundsOnly semantics");
    if (spec.bounds.degenerate()) return constant_result(spec, OracleMethod::VertexEnum);

    const Rational target = Rational(spec.n) * spec.unit_mean();  // required unit sum
    OracleResult out;
    out.method = OracleMethod::VertexEnum;

    bool found = false;
    Rational best_sumsq;
    std::int64_t best_ones = 0;
    Rational best_interior;
    bool best_has_interior = false;

    for (std::int64_t ones = 0; ones <= spec.n; ++ones) {
        Rational interior = target - Rational(ones);
        if (interior < 0) break;
        bool has_interior = interior > 0;
        if (interior >= 1) continue;
        if (has_interior && ones + 1 > spec.n) continue;
        ++out.evaluations;
        // sum of squares of the unit dataset; variance = sumsq/n - mean^2
        Rational sumsq = Rational(ones) + interior * interior;
        if (!found || sumsq > best_sumsq) {
            found = true;
            best_sumsq = sumsq;
            best_ones = ones;
            best_interior = interior;
            best_has_interior = has_interior;
        }
    }
    if (!found) throw InfeasibleError("no vertex shape meets the mean");

    out.argmax = materialize(spec.n, best_ones, best_interior, best_has_interior,
                             spec.bounds.lower, spec.bounds.width());
    out.best_variance = out.argmax.population_variance();
    return out;
}

OracleResult attained_vertex_max(const ProblemSpec& spec) {
    if (spec.bounds.semantics != BoundsSemantics::AttainedExtremes)
        throw SemanticsError("attained_vertex_max requires AttainedExtremes semantics");
    if (spec.bounds.degenerate())
        throw std::domain_error("attained_vertex_max requires m < M");
    if (spec.n < 2)
        throw InfeasibleError("cannot attain both extremes with fewer than 2 values");

    const Rational& m = spec.bounds.lower;
    const Rational w = spec.bounds.width();
    const Rational c_unit = spec.unit_mean();

    if (spec.n == 2) {
        if (c_unit != Rational(1, 2))
            throw InfeasibleError("n = 2 with pinned extremes forces mean (m + M)/2");
        OracleResult out;
        out.method = OracleMethod::VertexEnum;
        out.argmax = Dataset({m, spec.bounds.upper});
        out.best_variance = out.argmax.population_variance();
        out.evaluations = 1;
        return out;
    }

    // Unit sum left for the n - 2 free values after pinning one 0 and one 1.
    const Rational free_sum = Rational(spec.n) * c_unit - 1;
    if (free_sum < 0 || free_sum > Rational(spec.n - 2))
        throw InfeasibleError("pinned extremes are inconsistent with the mean");

    OracleResult out;
    out.method = OracleMethod::VertexEnum;
    bool found = false;
    Rational best_sumsq;
    std::int64_t best_ones = 0;
    Rational best_interior;
    bool best_has_interior = false;

    for (std::int64_t ones = 0; ones <= spec.n - 2; ++ones) {
        Rational interior = free_sum - Rational(ones);
        if (interior < 0) break;
        bool has_interior = interior > 0;
        if (interior >= 1) continue;
        if (has_interior && ones > spec.n - 3) continue;
        ++out.evaluations;
        Rational sumsq = Rational(1 + ones) + interior * interior;  // pinned 1 included
        if (!found || sumsq > best_sumsq) {
            found = true;
            best_sumsq = sumsq;
            best_ones = ones;
            best_interior = interior;
            best_has_interior = has_interior;
        }
    }
    if (!found) throw InfeasibleError("pinned extremes are inconsistent with the mean");

    // Full dataset: the pinned 0 and 1 plus the best free shape.
    out.argmax = materialize(spec.n, best_ones + 1, best_interior,
                             best_has_interior, m, w);
    out.best_variance = out.argmax.population_variance();
    return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Random point of {x in [lo, hi]^n : sum(x) = total}, sampled coordinate
// by coordinate within the bounds the remaining sum still allows.
std::vector<double> random_feasible(std::mt19937_64& rng, std::int64_t n,
                                    double lo, double hi, double total) {
    std::vector<double> x(static_cast<size_t>(n));
    double remaining = total;
    for (std::int64_t i = 0; i < n; ++i) {
        double rest = static_cast<double>(n - 1 - i);
        double lo_i = std::max(lo, remaining - rest * hi);
        double hi_i = std::min(hi, remaining - rest * lo);
        if (lo_i > hi_i) lo_i = hi_i = std::clamp(remaining / (rest + 1.0), lo, hi);
        double v = (i == n - 1)
                       ? std::clamp(remaining, lo, hi)
                       : std::uniform_real_distribution<double>(lo_i, hi_i)(rng);
        x[static_cast<size_t>(i)] = v;
        remaining -= v;
    }
    return x;
}

}  // namespace

OracleResult hill_climb_max(const ProblemSpec& spec, int restarts,
                            std::uint64_t seed) {
    if (restarts < 1) throw std::domain_error("need at least one restart");

    const double lo = to_double(spec.bounds.lower);
    const double hi = to_double(spec.bounds.upper);
    const double width = hi - lo;
    const auto n = static_cast<size_t>(spec.n);

    OracleResult out;
    out.method = OracleMethod::HillClimb;

    if (spec.n == 1 || spec.bounds.degenerate()) {
        out = constant_result(spec, OracleMethod::HillClimb);
        return out;
    }

    const double total = to_double(spec.mean) * static_cast<double>(spec.n);
    std::vector<double> best;
    double best_sumsq = -1.0;

    for (int restart = 0; restart < restarts; ++restart) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(restart))));
        std::vector<double> x = random_feasible(rng, spec.n, lo, hi, total);
        double sumsq = 0.0;
        for (double v : x) sumsq += v * v;

        std::uniform_int_distribution<size_t> pick(0, n - 1);
        const std::uint64_t stagnation_limit =
            std::max<std::uint64_t>(64, 2 * n * (n - 1));
        double step = width / 4.0;
        std::uint64_t failures = 0;
        while (step >= 1e-12) {
            size_t i = pick(rng);
            size_t j = pick(rng);
            ++out.evaluations;
            if (i == j) {
                ++failures;
            } else {
                // Move delta from x[i] to x[j]; mean is preserved and the
                // variance change is (2*delta^2 + 2*delta*(x[j]-x[i]))/n.
                double delta = std::min({step, x[i] - lo, hi - x[j]});
                if (delta > 0.0 && delta + x[j] - x[i] > 0.0) {
                    sumsq += 2.0 * delta * (delta + x[j] - x[i]);
                    x[i] -= delta;
                    x[j] += delta;
                    failures = 0;
                } else {
                    ++failures;
                }
            }
            if (failures >= stagnation_limit) {
                step /= 2.0;
                failures = 0;
            }
        }
        if (sumsq > best_sumsq) {
            best_sumsq = sumsq;
            best = x;
        }
    }

    std::vector<Rational> exact;
    exact.reserve(best.size());
    for (double v : best) exact.push_back(rational_from_double(v));
    out.argmax = Dataset(std::move(exact)).sorted_ascending();
    out.best_variance = out.argmax.population_variance();
    return out;
}

namespace {

struct GridSearch {
    std::int64_t n = 0;
    std::int64_t resolution = 0;
    std::uint64_t leaves = 0;
    std::int64_t best_sumsq = -1;
    std::vector<std::int64_t> current;
    std::vector<std::int64_t> best;

    // Nondecreasing tuples of grid ticks summing to `remaining`.
    void search(std::int64_t index, std::int64_t min_tick, std::int64_t remaining) {
        std::int64_t slots = n - index;
        if (slots == 0) {
            ++leaves;
            std::int64_t sumsq = 0;
            for (std::int64_t t : current) sumsq += t * t;
            if (sumsq > best_sumsq) {
                best_sumsq = sumsq;
                best = current;
            }
            return;
        }
        for (std::int64_t t = min_tick; t <= resolution; ++t) {
            std::int64_t rest = remaining - t;
            if (rest < 0) break;
            if (rest > (slots - 1) * resolution) continue;
            if (rest < (slots - 1) * t) break;  // nondecreasing tuples need rest >= t per slot
            current.push_back(t);
            search(index + 1, t, rest);
            current.pop_back();
        }
    }
};

}  // namespace

OracleResult grid_max(const ProblemSpec& spec, std::int64_t resolution) {
    if (spec.n > 6) throw std::domain_error("grid_max supports n <= 6");
    if (resolution < 1) throw std::domain_error("grid resolution must be positive");
    if (spec.bounds.degenerate()) return constant_result(spec, OracleMethod::Grid);

    Rational ticks = Rational(spec.n) * spec.unit_mean() * Rational(resolution);
    if (denominator(ticks) != 1)
        throw GridError("required sum is not representable on the grid");

    GridSearch search;
    search.n = spec.n;
    search.resolution = resolution;
    search.current.reserve(static_cast<size_t>(spec.n));
    search.search(0, 0, static_cast<std::int64_t>(numerator(ticks)));
    if (search.best_sumsq < 0)
        throw GridError("no grid dataset matches the required sum");

    const Rational& m = spec.bounds.lower;
    Rational unit = spec.bounds.width() / Rational(resolution);
    std::vector<Rational> values;
    values.reserve(search.best.size());
    for (std::int64_t t : search.best) values.push_back(m + unit * Rational(t));

    OracleResult out;
    out.method = OracleMethod::Grid;
    out.evaluations = search.leaves;
    out.argmax = Dataset(std::move(values));
    out.best_variance = out.argmax.population_variance();
    return out;
}

}  // namespace varmax
