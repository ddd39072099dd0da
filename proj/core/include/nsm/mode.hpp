#pragma once

#include <cstdint>
#include <utility>

#include "nsm/params.hpp"
#include "nsm/types.hpp"

namespace nsm {

/**
 * One Fourier mode of the perturbation state (n, u, E, B) at wavevector k.
 * Physical states obey two linear constraints at every k:
 *   Gauss law      i k . E = -(beta/gamma) n
 *   solenoidality    k . B = 0
 */
struct FourierMode {
    Vec3 k{};
    complex n{};
    CVec3 u{}, E{}, B{};

    double norm2() const { return std::norm(n) + nsm::norm2(u) + nsm::norm2(E) + nsm::norm2(B); }
    double norm() const { return std::sqrt(norm2()); }

    FourierMode operator-(const FourierMode& o) const {
        FourierMode d = *this;
        d.n -= o.n;
        d.u = d.u - o.u;
        d.E = d.E - o.E;
        d.B = d.B - o.B;
        return d;
    }
};

/// Absolute residuals (|ik.E + (beta/gamma) n|, |k.B|) of the two constraints.
std::pair<double, double> check_constraints(const FourierMode& mode, const PhysParams& p);

/// True iff both residuals are <= tol * (1 + mode.norm()).
bool constraints_ok(const FourierMode& mode, const PhysParams& p, double tol = 1e-10);

/**
 * Seeded random mode at wavevector k with the constraints enforced by
 * construction: E is drawn freely then its parallel part is replaced by the
 * Gauss value derived from n, and B is projected transverse. At k = 0 the
 * Gauss law degenerates to n = 0, which is likewise enforced.
 */
FourierMode random_constrained_mode(const Vec3& k, const PhysParams& p, std::uint64_t seed);

}  // namespace nsm
