#pragma once

#include <vector>

#include "nsm/types.hpp"

namespace nsm {

struct QuadNode {
    double x = 0.0;
    double w = 0.0;
};

/// n-point Gauss-Legendre rule on [a, b] (exact for polynomials of degree 2n-1).
std::vector<QuadNode> gauss_legendre(int n, double a, double b);

/**
 * Composite radial rule on [0, k_max]: Gauss-Legendre panels with breakpoints
 * {0.25, 0.5, 0.75, 1, 1.5, 2, 3, 4.5, ...} (geometric beyond 2, clipped to
 * k_max), dense near the origin where evolved spectra concentrate and
 * oscillate. points_per_panel >= 2.
 */
std::vector<QuadNode> radial_rule(int points_per_panel, double k_max);

struct SphereNode {
    Vec3 dir{};
    double w = 0.0;  // weights sum to 1 (mean over the unit sphere)
};

/**
 * 26-point rotationally symmetric rule on S^2, exact for polynomials of degree
 * <= 7: the 6 axis points (weight 1/21 each), 12 edge midpoints (4/105) and
 * 8 cube corners (9/280).
 */
std::vector<SphereNode> sphere_rule_26();

/**
 * Product rule: n_polar Gauss-Legendre nodes in cos(theta) crossed with
 * 2*n_polar equispaced azimuths; exact for spherical polynomials of degree
 * <= 2*n_polar - 1. Used as the doubled reference when checking convergence.
 */
std::vector<SphereNode> sphere_product_rule(int n_polar);

}  // namespace nsm
