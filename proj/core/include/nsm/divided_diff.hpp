#pragma once

#include <span>
#include <vector>

#include "nsm/types.hpp"

namespace nsm {

/**
 * Divided differences of z -> exp(z*t).
 *
 * All propagator coefficients are symmetric functions of spectral roots and
 * are assembled from these kernels, which keeps them finite and accurate
 * through root collisions (where the textbook ratio formulas lose every
 * significant digit).
 *
 * Evaluation switches representation on the node spread: once the largest
 * pairwise gap satisfies |x_i - x_j| * |t| < 1e-3 the direct recurrence would
 * cancel, so the value is summed as the centered series
 *   e^{mean t} * sum_m h_m(x - mean) t^{N-1+m} / (N-1+m)!
 * (h_m = complete homogeneous symmetric polynomial); otherwise one recurrence
 * step splits off the best-separated pair and recurses.
 */
complex exp_divided_diff(std::span<const complex> nodes, double t);

/// Divided difference of z -> z * exp(z*t) over the given nodes.
complex zexp_divided_diff(std::span<const complex> nodes, double t);

/// Divided difference of z -> z^2 * exp(z*t) over the given nodes.
complex z2exp_divided_diff(std::span<const complex> nodes, double t);

/** Value bundle for up to three nodes: dd0 = e^{x0 t}, dd1 over {x0,x1},
 *  dd2 over {x0,x1,x2}; orders beyond the node count are zero. */
struct ExpDividedDiffs {
    double t = 0.0;
    std::vector<complex> nodes;
    complex dd0{}, dd1{}, dd2{};
};

/**
 * Evaluate dd0..dd2 over 1..3 nodes.
 * Throws std::domain_error for an empty or oversized node list, or nonfinite input.
 */
ExpDividedDiffs exp_divided_diffs(std::span<const complex> nodes, double t);

}  // namespace nsm
