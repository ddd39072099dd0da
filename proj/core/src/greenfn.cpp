#include "nsm/greenfn.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "nsm/divided_diff.hpp"

namespace nsm {

GreenFluid fluid_green(double k2, const PhysParams& p, double t) {
    p.validate();
    if (!(k2 >= 0.0)) throw std::domain_error("fluid_green: k2 must be nonnegative");
    if (!(t >= 0.0)) throw std::domain_error("fluid_green: t must be nonnegative");

    GreenFluid g;
    g.t = t;
    g.k2 = k2;
    g.roots = fluid_roots(k2, p);

    const std::array<complex, 2> nodes{g.roots.lambda_plus, g.roots.lambda_minus};
    const complex dd1 = exp_divided_diff(nodes, t);
    const complex e_mean =
        0.5 * (std::exp(nodes[0] * t) + std::exp(nodes[1] * t));
    const complex l_mean = 0.5 * (nodes[0] + nodes[1]);  // = -mu k2 / 2

    // (lam_p e^{lam_m t} - lam_m e^{lam_p t})/(lam_p - lam_m) = mean(e) - mean(lam) dd1
    g.c_nn = e_mean - l_mean * dd1;
    g.c_uu = e_mean + l_mean * dd1;
    g.c_EE = g.c_nn;
    g.c_nu = complex(0.0, -p.gamma) * dd1;
    g.c_un = g.c_nu;
    g.c_uE = -p.beta * dd1;
    g.c_Eu = p.beta * dd1;
    g.c_En = 0.0;
    return g;
}

GreenEM em_green_scaled(double a, double r, double tau) {
    if (!(a > 0.0)) throw std::domain_error("em_green: a must be positive");
    if (!(r > 0.0)) throw std::domain_error("em_green: r must be positive");
    if (!(tau >= 0.0)) throw std::domain_error("em_green: tau must be nonnegative");

    GreenEM g;
    g.tau = tau;
    g.r = r;
    g.roots = em_cubic_roots(a, r);

    const std::array<complex, 3> lam{g.roots.lambda1, g.roots.lambda2, g.roots.lambda3};
    const double ar = a * r;

    const complex dd2 = exp_divided_diff(lam, tau);
    const complex ddz = zexp_divided_diff(lam, tau);
    const complex ddz2 = z2exp_divided_diff(lam, tau);

    // Fourth node -a r: the root product identity g(-ar) = -ar collapses the
    // rational prefactors of the first row into one extra divided difference.
    const std::array<complex, 4> lam_ar{complex(-ar, 0.0), lam[0], lam[1], lam[2]};
    const complex dd3_ar = exp_divided_diff(lam_ar, tau);
    const std::array<complex, 4> lam_0{complex(0.0, 0.0), lam[0], lam[1], lam[2]};
    const complex dd3_0 = exp_divided_diff(lam_0, tau);

    g.m11 = std::exp(complex(-ar * tau, 0.0)) - dd2 + ar * dd3_ar;
    g.m22 = ddz2 + ar * ddz;
    g.m33 = 1.0 - r * dd2 - a * r * r * dd3_0;
    g.m12 = -ddz;
    g.m13 = -dd2;
    g.m23 = ddz + ar * dd2;
    return g;
}

GreenEM em_green(const Vec3& k, const PhysParams& p, double t) {
    p.validate();
    const double kn = norm(k);
    if (kn == 0.0) throw std::domain_error("em_green: |k| must be positive");
    if (!(t >= 0.0)) throw std::domain_error("em_green: t must be nonnegative");
    const double r = (kn / p.beta) * (kn / p.beta);
    return em_green_scaled(p.a(), r, p.beta * t);
}

GreenEval green_eval(const Vec3& k, const PhysParams& p, double t) {
    GreenEval ev;
    ev.k = k;
    ev.t = t;
    const double kn = norm(k);
    ev.k_zero = kn == 0.0;
    ev.fluid = fluid_green(kn * kn, p, t);
    if (!ev.k_zero) ev.em = em_green(k, p, t);
    return ev;
}

std::pair<CVec3, CVec3> project_parallel_perp(const CVec3& v, const Vec3& k) {
    const double kn = norm(k);
    if (kn == 0.0) return {v, CVec3{}};
    const Vec3 khat = scale(k, 1.0 / kn);
    const complex along = dot(khat, v);
    const CVec3 par = along * CVec3{khat[0], khat[1], khat[2]};
    return {par, v - par};
}

FourierMode apply_green_eval(const GreenEval& g, const PhysParams& p,
                             const FourierMode& mode) {
    FourierMode out;
    out.k = mode.k;

    if (g.k_zero) {
        // Exact k=0 limit: n and B are invariant, (u, E) rotate at frequency beta.
        const double c = std::cos(p.beta * g.t), s = std::sin(p.beta * g.t);
        out.n = mode.n;
        out.u = c * mode.u - s * mode.E;
        out.E = s * mode.u + c * mode.E;
        out.B = mode.B;
        return out;
    }

    const auto [u_par, u_perp] = project_parallel_perp(mode.u, mode.k);
    const auto [E_par, E_perp] = project_parallel_perp(mode.E, mode.k);
    const auto [B_par, B_perp] = project_parallel_perp(mode.B, mode.k);
    (void)B_par;  // zero for constrained data

    const GreenFluid& f = g.fluid;
    const CVec3 kvec{complex(mode.k[0]), complex(mode.k[1]), complex(mode.k[2])};
    const complex k_dot_u = dot(mode.k, mode.u);

    out.n = f.c_nn * mode.n + f.c_nu * k_dot_u;
    CVec3 u_new = f.c_un * mode.n * kvec + f.c_uu * u_par + f.c_uE * E_par;
    CVec3 E_new = f.c_En * mode.n * kvec + f.c_Eu * u_par + f.c_EE * E_par;

    const GreenEM& m = g.em;
    const Vec3 xi = scale(mode.k, 1.0 / p.beta);
    const complex i(0.0, 1.0);
    auto ix = [&](const CVec3& v) { return i * cross(xi, v); };

    u_new += m.m11 * u_perp + m.m12 * E_perp + m.m13 * ix(B_perp);
    E_new += -m.m12 * u_perp + m.m22 * E_perp + m.m23 * ix(B_perp);
    out.B = m.m13 * ix(u_perp) - m.m23 * ix(E_perp) + m.m33 * B_perp;

    out.u = u_new;
    out.E = E_new;
    return out;
}

FourierMode apply_green(const FourierMode& mode, const PhysParams& p, double t,
                        double constraint_tol) {
    p.validate();
    if (!(t >= 0.0)) throw std::domain_error("apply_green: t must be nonnegative");
    auto [gauss, sol] = check_constraints(mode, p);
    const double cap = constraint_tol * (1.0 + mode.norm());
    if (gauss > cap || sol > cap)
        throw std::invalid_argument("apply_green: input mode violates the linear constraints");

    return apply_green_eval(green_eval(mode.k, p, t), p, mode);
}

}  // namespace nsm
