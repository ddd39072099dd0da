#pragma once

#include <utility>

#include "nsm/mode.hpp"
#include "nsm/spectra.hpp"

namespace nsm {

/**
 * Closed-form propagator of the longitudinal block (n, u_par, E_par).
 * Coefficients act as
 *   n(t)     = c_nn n0 + c_nu (k . u0)
 *   u_par(t) = c_un n0 k + c_uu u0_par + c_uE E0_par
 *   E_par(t) = c_En n0 k + c_Eu u0_par + c_EE E0_par
 * c_En is a structural zero (density never feeds the parallel field directly)
 * and c_Eu = -c_uE = beta * dd1, the first divided difference of exp over the
 * acoustic roots.
 */
struct GreenFluid {
    complex c_nn{}, c_nu{}, c_un{}, c_uu{}, c_uE{}, c_En{}, c_Eu{}, c_EE{};
    QuadraticRoots roots;
    double t = 0.0;
    double k2 = 0.0;
};

/**
 * Closed-form propagator of the transverse block (u_perp, E_perp, B_perp) in
 * rescaled variables tau = beta t, xi = k / beta, r = |xi|^2. Scalar
 * coefficients act as
 *   u_perp(tau) =  m11 u0 + m12 E0 + m13 (i xi x B0)
 *   E_perp(tau) = -m12 u0 + m22 E0 + m23 (i xi x B0)
 *   B_perp(tau) =  m13 (i xi x u0) - m23 (i xi x E0) + m33 B0
 * Every coefficient is a symmetric function of the cubic roots and is
 * evaluated through exp divided differences, so root collisions cost no
 * accuracy.
 */
struct GreenEM {
    complex m11{}, m22{}, m33{}, m12{}, m13{}, m23{};
    CubicRoots roots;
    double tau = 0.0;
    double r = 0.0;
};

/// Both blocks plus the geometry they were evaluated at.
struct GreenEval {
    GreenFluid fluid;
    GreenEM em;
    Vec3 k{};
    double t = 0.0;
    bool k_zero = false;  // at k = 0 the closed field rotation replaces both blocks
};

GreenFluid fluid_green(double k2, const PhysParams& p, double t);

/// Transverse block at wavevector k; |k| = 0 is a domain error (use apply_green there).
GreenEM em_green(const Vec3& k, const PhysParams& p, double t);

/// Transverse block parametrized directly by (a, r, tau).
GreenEM em_green_scaled(double a, double r, double tau);

GreenEval green_eval(const Vec3& k, const PhysParams& p, double t);

/// Split v into (parallel, perpendicular) parts relative to k (k = 0 puts all of v in parallel).
std::pair<CVec3, CVec3> project_parallel_perp(const CVec3& v, const Vec3& k);

/**
 * Propagate one constrained Fourier mode by time t >= 0.
 * The input must satisfy the Gauss and solenoidal constraints to
 * constraint_tol * (1 + |mode|); violations throw std::invalid_argument.
 * At k = 0 the exact limit flow is applied: n and B are frozen and (u, E)
 * rotate at frequency beta.
 */
FourierMode apply_green(const FourierMode& mode, const PhysParams& p, double t,
                        double constraint_tol = 1e-8);

/**
 * Assembly half of apply_green: propagate a mode through precomputed
 * coefficient blocks, skipping validation and the constraint check. Meant
 * for tight loops that reuse one green_eval(k, p, t) across many vectors at
 * the same wavevector (the time stepper applies each evaluation to both the
 * state and the source). mode.k must be the k the blocks were built at, and
 * the mode must lie on the constraint manifold for the result to be the
 * exact flow — off-manifold input is silently projected, not propagated.
 */
FourierMode apply_green_eval(const GreenEval& g, const PhysParams& p,
                             const FourierMode& mode);

}  // namespace nsm
