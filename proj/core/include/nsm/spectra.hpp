#pragma once

#include <vector>

#include "nsm/params.hpp"
#include "nsm/types.hpp"

namespace nsm {

/**
 * Roots of the longitudinal (acoustic) dispersion relation
 *   z^2 + mu k^2 z + (gamma^2 k^2 + beta^2) = 0.
 * lambda_plus is the root with the larger real part; on ties the one with
 * the larger imaginary part. psi is the discriminant mu^2 k^4 - 4(gamma^2 k^2 + beta^2).
 */
struct QuadraticRoots {
    complex lambda_plus{}, lambda_minus{};
    double psi = 0.0;
};

/// Solve the acoustic quadratic at squared wavenumber k2 >= 0.
QuadraticRoots fluid_roots(double k2, const PhysParams& p);

enum class RootKind { one_real, three_real, degenerate };

/**
 * Roots of the transverse dispersion cubic
 *   z^3 + a r z^2 + (r + 1) z + a r^2 = 0,   r = |xi|^2.
 *
 * For kind one_real, lambda1 is the real root sigma and lambda2/lambda3 the
 * conjugate pair (lambda2 carries the nonnegative imaginary part); for
 * three_real the roots are sorted by descending value. S and R are the
 * resolvent combinations S = 2c2^3 - 9 c2 c1 + 27 c0 and R = S^2 - 4(c2^2 - 3c1)^3;
 * R > 0 marks the one-real-root regime, R < 0 three real roots, and |R| below
 * 1e-8 * 27 * 4 (1+r)^3 is reported as degenerate.
 */
struct CubicRoots {
    complex lambda1{}, lambda2{}, lambda3{};
    double S = 0.0;
    double R = 0.0;
    RootKind kind = RootKind::one_real;
};

/**
 * Resolvent pair (S, R) for the transverse cubic. R is evaluated through the
 * expanded polynomial form 27*(4(1+r)^3 + a^2 r^2 (8r^2 - 20r - 1) + 4 a^4 r^5)
 * and cross-checked against its re-expansion in powers of r.
 */
struct CubicDiscriminant {
    double S = 0.0;
    double R = 0.0;
};

CubicDiscriminant cubic_discriminant(double a, double r);

/**
 * Solve the transverse cubic. Requires a > 0 and r >= 0; r == 0 returns the
 * exact limit roots {0, +i, -i}. Roots are polished by one guarded Newton
 * step in extended precision.
 */
CubicRoots em_cubic_roots(double a, double r);

/**
 * Truncated series roots near the endpoints of the r range:
 *   r <= 0.1:  sigma = -a r^2 (1 - r),            chi = -a r (1 - r)/2 +- i sqrt(1 + r)
 *   r >= 100:  sigma = -a r + (1/(a r))(1 - 1/(a^2 r)),
 *              chi  = -(1/(2 a r))(1 - 1/(a^2 r)) +- i sqrt(r)
 * Anything between the windows is a domain error.
 */
CubicRoots root_asymptotics(double a, double r);

/**
 * All r in [r_min, r_max] where R(a, r) changes sign, located by a log-spaced
 * scan (n_scan intervals) refined by bisection to 1e-12 relative accuracy.
 * May legitimately be empty: R can stay positive for every r even when
 * a > 1/sqrt(5) (the first genuine sign dips appear around a ~ 15).
 */
std::vector<double> discriminant_zero_set(double a, double r_min, double r_max,
                                          int n_scan = 4000);

}  // namespace nsm
