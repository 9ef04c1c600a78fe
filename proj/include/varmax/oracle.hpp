#pragma once

#include "varmax/types.hpp"

#include <cstdint>

namespace varmax {

enum class OracleMethod { VertexEnum, HillClimb, Grid };

struct OracleResult {
    Rational best_variance;  // population variance of argmax, exact
    Dataset argmax;          // sorted ascending
    OracleMethod method = OracleMethod::VertexEnum;
    std::uint64_t evaluations = 0;
};

// Exact maximum by enumerating the candidate shapes: k values at the
// upper bound, at most one interior value fixed by the mean, the rest at
// the lower bound. k runs over every feasible count, so the result
// verifies the closed form instead of re-deriving it.
OracleResult vertex_max(const ProblemSpec& spec);

// Exact maximum when at least one value must equal each bound: pin one
// value at each extreme, then enumerate the same shapes over the n - 2
// free values. Requires AttainedExtremes semantics, n >= 2 and m < M;
// throws InfeasibleError when the pinned extremes cannot meet the mean.
OracleResult attained_vertex_max(const ProblemSpec& spec);

// Random-restart pairwise-transfer ascent in doubles: move mass between
// coordinate pairs at fixed mean, clamped to the bounds, accepting strict
// improvements; the step halves on stagnation down to 1e-12. Deterministic
// for a given seed; restart sub-seeds depend only on (seed, restart index).
// The returned dataset is rationalized exactly and best_variance is its
// exact population variance.
OracleResult hill_climb_max(const ProblemSpec& spec, int restarts,
                            std::uint64_t seed);

// Exhaustive search over datasets on the grid {m + t(M-m)/q : t = 0..q}
// whose sum matches the mean exactly. Requires n <= 6; throws GridError
// when the required sum is not representable on the grid. Lower-bounds the
// true maximum; equal whenever the witness is grid-representable.
OracleResult grid_max(const ProblemSpec& spec, std::int64_t resolution);

}  // namespace varmax
