#pragma once

#include "nsm/mode.hpp"
#include "nsm/params.hpp"
#include "nsm/types.hpp"

namespace nsm {

/**
 * Radial envelope f(|k|) for initial Fourier data, normalized so f(0) = 1.
 * The catalog:
 *   gaussian(width):        exp(-|k|^2 / (2 width^2))
 *   bump(support):          exp(1 - 1/(1 - (|k|/support)^2)) inside, 0 outside
 *   power_cutoff(p, kmax):  (1 + |k|^2)^{-p/2} for |k| <= kmax, 0 outside
 * gaussian and power_cutoff have f(0) = 1 != 0, which the algebraic decay
 * rates presume; bump shares that property but with compact support.
 */
struct RadialShape {
    enum class Kind { gaussian, bump, power_cutoff };
    Kind kind = Kind::gaussian;
    double p1 = 1.0;  // width / support / exponent p
    double p2 = 0.0;  // power_cutoff only: cutoff radius

    double operator()(double k) const;

    /// Radius beyond which the envelope is negligible (quadrature truncation).
    double support_radius() const;
};

RadialShape gaussian_shape(double width);
RadialShape bump_shape(double support);
RadialShape power_cutoff_shape(double p, double k_max);

/**
 * Separable initial data     Û0(k) = f(|k|) * (angular templates),
 * constraint-satisfying at every k by construction:
 *   n̂0 = w_n f,     û0 = w_u f c_u,     B̂0 = w_B f (I - k̃k̃ᵀ) c_B,
 *   Ê0 = w_E f (I - k̃k̃ᵀ) c_E + i (β/γ) (n̂0/|k|) k̃   (Gauss law part).
 * Setting w_n = 0 isolates the transverse E-source; the fixed template
 * directions keep runs reproducible.
 */
struct RadialProfile {
    RadialShape shape{};
    double w_n = 0.0;
    double w_u = 0.0;
    double w_E = 0.0;
    double w_B = 0.0;
    Vec3 c_u{1.0, 0.0, 0.0};
    Vec3 c_E{0.0, 1.0, 0.0};
    Vec3 c_B{0.0, 0.0, 1.0};
};

/// Evaluate the profile's Fourier mode at wavevector k (constraints hold exactly).
FourierMode profile_mode(const RadialProfile& profile, const PhysParams& params,
                         const Vec3& k);

}  // namespace nsm
