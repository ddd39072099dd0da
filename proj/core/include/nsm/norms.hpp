#pragma once

#include <span>
#include <vector>

#include "nsm/params.hpp"
#include "nsm/profile.hpp"

namespace nsm {

/// L^2 norms of the evolved components at the requested times.
struct NormSeries {
    std::vector<double> t;
    std::vector<double> n, u, E, B, grad_B;
};

struct RadialQuadSpec {
    int points_per_panel = 24;
    double k_max = 8.0;
};

/**
 * Physical-space L^2 norms via Plancherel,
 *   ||X(t)|| = (2*pi)^{-3/2} ( Int |X̂(t,k)|^2 dk )^{1/2},
 * with the integral split into a composite Gauss-Legendre radial rule times a
 * spherical rule (angular_order == 0 selects the fixed 26-point degree-7 set,
 * otherwise the product rule with that polar count). Every norm is recomputed
 * with doubled orders; a relative change above 0.1% throws a std::runtime_error
 * carrying the worst observed drift. grad_B carries the |k| |B̂| integrand.
 *
 * Requires k_max to cover the profile's support radius.
 */
NormSeries l2_norm_evolution(const PhysParams& params, const RadialProfile& profile,
                             std::span<const double> t_grid,
                             RadialQuadSpec radial = {}, int angular_order = 0);

}  // namespace nsm
