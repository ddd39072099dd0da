#include "nsm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsm {

namespace {

using lcomplex = std::complex<long double>;

// One guarded Newton step on g(z) = z^3 + c2 z^2 + c1 z + c0 in extended precision.
complex polish_cubic_root(complex z0, double c2, double c1, double c0) {
    const lcomplex z(z0.real(), z0.imag());
    const lcomplex g = ((z + (long double)c2) * z + (long double)c1) * z + (long double)c0;
    const lcomplex gp = (3.0L * z + 2.0L * (long double)c2) * z + (long double)c1;
    const long double scale = std::max<long double>(1.0L, std::norm(z));
    if (std::abs(gp) <= 1e-8L * scale) return z0;  // multiple root: Newton would misbehave
    const lcomplex zn = z - g / gp;
    return complex(static_cast<double>(zn.real()), static_cast<double>(zn.imag()));
}

}  // namespace

QuadraticRoots fluid_roots(double k2, const PhysParams& p) {
    p.validate();
    if (!(k2 >= 0.0)) throw std::domain_error("fluid_roots: k2 must be nonnegative");
    const double b = p.mu * k2;
    const double c = p.gamma * p.gamma * k2 + p.beta * p.beta;
    const double psi = b * b - 4.0 * c;

    QuadraticRoots out;
    out.psi = psi;
    if (psi >= 0.0) {
        // b >= 0, so q = -(b + sqrt(psi))/2 avoids cancellation; the other root is c/q.
        const double q = -0.5 * (b + std::sqrt(psi));
        const double big = q;          // more negative root
        const double small = c / q;    // closer to zero
        out.lambda_plus = complex(std::max(big, small), 0.0);
        out.lambda_minus = complex(std::min(big, small), 0.0);
    } else {
        const double im = 0.5 * std::sqrt(-psi);
        out.lambda_plus = complex(-0.5 * b, im);
        out.lambda_minus = complex(-0.5 * b, -im);
    }
    return out;
}

CubicDiscriminant cubic_discriminant(double a, double r) {
    if (!(a > 0.0) || !(r >= 0.0))
        throw std::domain_error("cubic_discriminant: need a > 0 and r >= 0");
    CubicDiscriminant d;
    d.S = 2.0 * a * a * a * r * r * r - 9.0 * a * r * (r + 1.0) + 27.0 * a * r * r;

    const double onepr = 1.0 + r;
    const double a2 = a * a, r2 = r * r;
    const double factored =
        27.0 * (4.0 * onepr * onepr * onepr + a2 * r2 * (8.0 * r2 - 20.0 * r - 1.0) +
                4.0 * a2 * a2 * r2 * r2 * r);
    const double expanded =
        27.0 * (4.0 + 12.0 * r + (12.0 - a2) * r2 + (4.0 - 20.0 * a2) * r2 * r +
                8.0 * a2 * r2 * r2 + 4.0 * a2 * a2 * r2 * r2 * r);
    const double scale = std::max({1.0, std::abs(factored), std::abs(expanded)});
    if (std::abs(factored - expanded) > 1e-10 * scale)
        throw std::runtime_error("cubic_discriminant: internal form mismatch");
    d.R = factored;
    return d;
}

CubicRoots em_cubic_roots(double a, double r) {
    if (!(a > 0.0)) throw std::domain_error("em_cubic_roots: a must be positive");
    if (!(r >= 0.0)) throw std::domain_error("em_cubic_roots: r must be nonnegative");

    CubicRoots out;
    if (r == 0.0) {
        out.lambda1 = 0.0;
        out.lambda2 = complex(0.0, 1.0);
        out.lambda3 = complex(0.0, -1.0);
        const auto d = cubic_discriminant(a, 0.0);
        out.S = d.S;
        out.R = d.R;
        out.kind = RootKind::one_real;
        return out;
    }

    const double c2 = a * r, c1 = r + 1.0, c0 = a * r * r;
    const auto d = cubic_discriminant(a, r);
    out.S = d.S;
    out.R = d.R;

    const double onepr = 1.0 + r;
    const double degenerate_scale = 1e-8 * 27.0 * 4.0 * onepr * onepr * onepr;
    const bool degenerate = std::abs(d.R) <= degenerate_scale;

    const double Q = (c2 * c2 - 3.0 * c1) / 9.0;
    const double Rn = d.S / 54.0;  // Rn^2 - Q^3 = R / 2916

    if (d.R < 0.0) {
        // three real roots through the arccos form
        const double sqQ = std::sqrt(Q);
        const double theta = std::acos(std::clamp(Rn / (Q * sqQ), -1.0, 1.0));
        double x[3];
        for (int j = 0; j < 3; ++j)
            x[j] = -2.0 * sqQ * std::cos((theta + 2.0 * M_PI * j) / 3.0) - c2 / 3.0;
        std::sort(x, x + 3, std::greater<>());
        complex z[3] = {x[0], x[1], x[2]};
        for (auto& zz : z) zz = polish_cubic_root(zz, c2, c1, c0);
        out.lambda1 = complex(z[0].real(), 0.0);
        out.lambda2 = complex(z[1].real(), 0.0);
        out.lambda3 = complex(z[2].real(), 0.0);
        out.kind = degenerate ? RootKind::degenerate : RootKind::three_real;
    } else {
        const double disc = std::sqrt(std::max(0.0, Rn * Rn - Q * Q * Q));
        const double A = -std::copysign(std::cbrt(std::abs(Rn) + disc), Rn);
        const double B = A != 0.0 ? Q / A : 0.0;
        complex sigma(A + B - c2 / 3.0, 0.0);
        complex chi(-0.5 * (A + B) - c2 / 3.0, 0.5 * std::sqrt(3.0) * (A - B));
        sigma = polish_cubic_root(sigma, c2, c1, c0);
        chi = polish_cubic_root(chi, c2, c1, c0);
        out.lambda1 = complex(sigma.real(), 0.0);
        out.lambda2 = complex(chi.real(), std::abs(chi.imag()));
        out.lambda3 = std::conj(out.lambda2);
        out.kind = degenerate ? RootKind::degenerate : RootKind::one_real;
    }
    return out;
}

CubicRoots root_asymptotics(double a, double r) {
    if (!(a > 0.0) || !(r > 0.0))
        throw std::domain_error("root_asymptotics: need a > 0 and r > 0");
    CubicRoots out;
    const auto d = cubic_discriminant(a, r);
    out.S = d.S;
    out.R = d.R;
    out.kind = RootKind::one_real;
    if (r <= 0.1) {
        out.lambda1 = complex(-a * r * r * (1.0 - r), 0.0);
        const double re = -0.5 * a * r * (1.0 - r);
        const double im = std::sqrt(1.0 + r);
        out.lambda2 = complex(re, im);
        out.lambda3 = complex(re, -im);
    } else if (r >= 100.0) {
        const double ar = a * r;
        out.lambda1 = complex(-ar + (1.0 / ar) * (1.0 - 1.0 / (a * a * r)), 0.0);
        const double re = -(1.0 / (2.0 * ar)) * (1.0 - 1.0 / (a * a * r));
        const double im = std::sqrt(r);
        out.lambda2 = complex(re, im);
        out.lambda3 = complex(re, -im);
    } else {
        throw std::domain_error("root_asymptotics: r outside the series windows [0,0.1] and [100,inf)");
    }
    return out;
}

std::vector<double> discriminant_zero_set(double a, double r_min, double r_max, int n_scan) {
    if (!(a > 0.0) || !(r_min > 0.0) || !(r_max > r_min))
        throw std::domain_error("discriminant_zero_set: need a > 0 and 0 < r_min < r_max");
    if (n_scan < 8) throw std::domain_error("discriminant_zero_set: n_scan too small");

    auto Rof = [a](double r) { return cubic_discriminant(a, r).R; };

    std::vector<double> zeros;
    const double lmin = std::log(r_min), lmax = std::log(r_max);
    double prev_r = r_min, prev_R = Rof(r_min);
    for (int i = 1; i <= n_scan; ++i) {
        const double r = std::exp(lmin + (lmax - lmin) * i / n_scan);
        const double Rv = Rof(r);
        if ((prev_R < 0.0) != (Rv < 0.0)) {
            double lo = prev_r, hi = r;
            double flo = prev_R;
            while ((hi - lo) > 1e-12 * hi) {
                const double mid = 0.5 * (lo + hi);
                const double fm = Rof(mid);
                if ((flo < 0.0) != (fm < 0.0)) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            zeros.push_back(0.5 * (lo + hi));
        }
        prev_r = r;
        prev_R = Rv;
    }
    return zeros;
}

}  // namespace nsm
