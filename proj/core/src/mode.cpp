#include "nsm/mode.hpp"

#include <cmath>
#include <random>

namespace nsm {

std::pair<double, double> check_constraints(const FourierMode& mode, const PhysParams& p) {
    p.validate();
    const complex i(0.0, 1.0);
    const complex gauss = i * dot(mode.k, mode.E) + (p.beta / p.gamma) * mode.n;
    const complex sol = dot(mode.k, mode.B);
    return {std::abs(gauss), std::abs(sol)};
}

bool constraints_ok(const FourierMode& mode, const PhysParams& p, double tol) {
    auto [g, s] = check_constraints(mode, p);
    const double cap = tol * (1.0 + mode.norm());
    return g <= cap && s <= cap;
}

FourierMode random_constrained_mode(const Vec3& k, const PhysParams& p, std::uint64_t seed) {
    p.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    auto rc = [&] { return complex(unif(rng), unif(rng)); };

    FourierMode m;
    m.k = k;
    m.n = rc();
    m.u = {rc(), rc(), rc()};
    m.E = {rc(), rc(), rc()};
    m.B = {rc(), rc(), rc()};

    const double kn = norm(k);
    if (kn == 0.0) {
        m.n = 0.0;  // Gauss law at k=0 forces a vanishing density perturbation
        return m;
    }
    const Vec3 khat = scale(k, 1.0 / kn);
    const complex i(0.0, 1.0);

    // E_par := i (beta/gamma) (n/|k|) khat solves i k.E = -(beta/gamma) n.
    const complex epar = i * (p.beta / p.gamma) * m.n / kn;
    const complex e_along = dot(khat, m.E);
    m.E = m.E - e_along * CVec3{khat[0], khat[1], khat[2]} + epar * CVec3{khat[0], khat[1], khat[2]};

    const complex b_along = dot(khat, m.B);
    m.B = m.B - b_along * CVec3{khat[0], khat[1], khat[2]};
    return m;
}

}  // namespace nsm
