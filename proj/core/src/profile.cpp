#include "nsm/profile.hpp"

#include <cmath>
#include <stdexcept>

namespace nsm {

double RadialShape::operator()(double k) const {
    switch (kind) {
        case Kind::gaussian:
            return std::exp(-0.5 * (k / p1) * (k / p1));
        case Kind::bump: {
            const double s = k / p1;
            if (s >= 1.0) return 0.0;
            return std::exp(1.0 - 1.0 / (1.0 - s * s));
        }
        case Kind::power_cutoff:
            if (k > p2) return 0.0;
            return std::pow(1.0 + k * k, -0.5 * p1);
    }
    return 0.0;
}

double RadialShape::support_radius() const {
    switch (kind) {
        case Kind::gaussian:
            return 8.0 * p1;  // relative tail mass ~ exp(-32) ~ 1e-14
        case Kind::bump:
            return p1;
        case Kind::power_cutoff:
            return p2;
    }
    return 0.0;
}

RadialShape gaussian_shape(double width) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian_shape: width must be > 0");
    return {RadialShape::Kind::gaussian, width, 0.0};
}

RadialShape bump_shape(double support) {
    if (!(support > 0.0)) throw std::invalid_argument("bump_shape: support must be > 0");
    return {RadialShape::Kind::bump, support, 0.0};
}

RadialShape power_cutoff_shape(double p, double k_max) {
    if (!(p > 0.0) || !(k_max > 0.0))
        throw std::invalid_argument("power_cutoff_shape: p and k_max must be > 0");
    return {RadialShape::Kind::power_cutoff, p, k_max};
}

FourierMode profile_mode(const RadialProfile& profile, const PhysParams& params,
                         const Vec3& k) {
    const double K = norm(k);
    const double f = profile.shape(K);

    FourierMode mode;
    mode.k = k;
    if (K == 0.0) {
        // The Gauss law at k = 0 reads 0 = -(beta/gamma) n̂, so the density
        // template is suppressed there; everything else passes through.
        mode.n = 0.0;
        mode.u = CVec3{profile.w_u * f * profile.c_u[0],
                       profile.w_u * f * profile.c_u[1],
                       profile.w_u * f * profile.c_u[2]};
        mode.E = CVec3{profile.w_E * f * profile.c_E[0],
                       profile.w_E * f * profile.c_E[1],
                       profile.w_E * f * profile.c_E[2]};
        mode.B = CVec3{profile.w_B * f * profile.c_B[0],
                       profile.w_B * f * profile.c_B[1],
                       profile.w_B * f * profile.c_B[2]};
        return mode;
    }

    const Vec3 kt = scale(k, 1.0 / K);
    const auto perp_of = [&kt](const Vec3& c) {
        const double along = kt[0] * c[0] + kt[1] * c[1] + kt[2] * c[2];
        return CVec3{complex(c[0] - along * kt[0], 0.0),
                     complex(c[1] - along * kt[1], 0.0),
                     complex(c[2] - along * kt[2], 0.0)};
    };

    mode.n = profile.w_n * f;
    mode.u = CVec3{complex(profile.w_u * f * profile.c_u[0], 0.0),
                   complex(profile.w_u * f * profile.c_u[1], 0.0),
                   complex(profile.w_u * f * profile.c_u[2], 0.0)};
    mode.B = perp_of(profile.c_B) * complex(profile.w_B * f, 0.0);

    // Transverse template plus the longitudinal part slaved to the density.
    const complex e_par = complex(0.0, 1.0) * (params.beta / params.gamma) *
                          (mode.n / K);
    mode.E = perp_of(profile.c_E) * complex(profile.w_E * f, 0.0) +
             CVec3{e_par * kt[0], e_par * kt[1], e_par * kt[2]};
    return mode;
}

}  // namespace nsm
