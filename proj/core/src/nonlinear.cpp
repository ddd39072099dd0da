#include "nsm/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>

#include "nsm/greenfn.hpp"

namespace nsm {

namespace {

// ---------------------------------------------------------------------------
// Spectral containers and the canonical mode walk.
//
// Fields live in the r2c half-spectrum. Every stored coefficient with
// 0 < iz < n/2 represents itself plus an unstored conjugate partner; on the
// iz = 0 plane both partners are stored, so per-mode operations visit only a
// canonical member of each pair and write the partner as the exact conjugate.
// That keeps Hermitian symmetry — and hence reality of the physical fields —
// a structural property rather than a numerical one.
// ---------------------------------------------------------------------------

struct SpecState {
    std::vector<complex> rho;
    std::array<std::vector<complex>, 3> v{}, E{}, B{};

    void assign(std::size_t m) {
        rho.assign(m, complex{});
        for (int c = 0; c < 3; ++c) {
            v[c].assign(m, complex{});
            E[c].assign(m, complex{});
            B[c].assign(m, complex{});
        }
    }
};

struct SpecTend {
    std::vector<complex> h1;
    std::array<std::vector<complex>, 3> h2{}, h3{};
};

struct ModeRef {
    std::size_t idx = 0;
    std::size_t mirror = 0;
    Vec3 k{};
    bool mirrored = false;
};

std::vector<ModeRef> build_mode_list(const SpectralWorkspace& ws, int cutoff) {
    std::vector<ModeRef> modes;
    const int n = ws.n();
    for (int ix = 0; ix < n; ++ix) {
        const int jx = ws.signed_index(ix);
        if (std::abs(jx) > cutoff) continue;
        for (int iy = 0; iy < n; ++iy) {
            const int jy = ws.signed_index(iy);
            if (std::abs(jy) > cutoff) continue;
            for (int iz = 0; iz <= cutoff; ++iz) {
                ModeRef m;
                m.idx = ws.spec_index(ix, iy, iz);
                m.k = ws.wavevector(ix, iy, iz);
                if (iz == 0) {
                    if (jy < 0 || (jy == 0 && jx < 0)) continue;  // partner is canonical
                    const int mx = ix == 0 ? 0 : n - ix;
                    const int my = iy == 0 ? 0 : n - iy;
                    m.mirror = ws.spec_index(mx, my, 0);
                    m.mirrored = m.mirror != m.idx;
                } else {
                    m.mirror = m.idx;
                }
                modes.push_back(m);
            }
        }
    }
    return modes;
}

FourierMode get_mode(const SpecState& s, const ModeRef& m) {
    FourierMode f;
    f.k = m.k;
    f.n = s.rho[m.idx];
    f.u = CVec3{s.v[0][m.idx], s.v[1][m.idx], s.v[2][m.idx]};
    f.E = CVec3{s.E[0][m.idx], s.E[1][m.idx], s.E[2][m.idx]};
    f.B = CVec3{s.B[0][m.idx], s.B[1][m.idx], s.B[2][m.idx]};
    return f;
}

void set_mode(SpecState& s, const ModeRef& m, const FourierMode& f) {
    s.rho[m.idx] = f.n;
    for (int c = 0; c < 3; ++c) {
        s.v[c][m.idx] = f.u[c];
        s.E[c][m.idx] = f.E[c];
        s.B[c][m.idx] = f.B[c];
    }
    if (m.mirrored) {
        s.rho[m.mirror] = std::conj(f.n);
        for (int c = 0; c < 3; ++c) {
            s.v[c][m.mirror] = std::conj(f.u[c]);
            s.E[c][m.mirror] = std::conj(f.E[c]);
            s.B[c][m.mirror] = std::conj(f.B[c]);
        }
    }
}

/// Tendencies arranged as a state-shaped mode: h1 in the density slot,
/// h2 in the velocity slot, h3 in the electric slot, nothing magnetic.
FourierMode tend_mode(const SpecTend& t, const ModeRef& m) {
    FourierMode f;
    f.k = m.k;
    f.n = t.h1[m.idx];
    f.u = CVec3{t.h2[0][m.idx], t.h2[1][m.idx], t.h2[2][m.idx]};
    f.E = CVec3{t.h3[0][m.idx], t.h3[1][m.idx], t.h3[2][m.idx]};
    return f;
}

FourierMode axpy(FourierMode a, double s, const FourierMode& b) {
    const complex cs(s, 0.0);
    a.n += cs * b.n;
    a.u += cs * b.u;
    a.E += cs * b.E;
    a.B += cs * b.B;
    return a;
}

// ---------------------------------------------------------------------------
// Engine: one grid's transforms, mode list, source evaluation and stepping.
// ---------------------------------------------------------------------------

class Engine {
public:
    Engine(const PhysParams& p, const GridConfig& cfg)
        : p_(p), cfg_(cfg), ws_(cfg.n_per_axis, cfg.box_length) {
        p_.validate();
        cfg_.validate();
        modes_ = build_mode_list(ws_, cfg_.dealias_cutoff());
    }

    SpectralWorkspace& ws() { return ws_; }
    const std::vector<ModeRef>& modes() const { return modes_; }
    int cutoff() const { return cfg_.dealias_cutoff(); }

    void to_spec(const GridState& g, SpecState& s) {
        ws_.forward(g.rho, s.rho);
        ws_.dealias(s.rho, cutoff());
        for (int c = 0; c < 3; ++c) {
            ws_.forward(g.v[c], s.v[c]);
            ws_.forward(g.Et[c], s.E[c]);
            ws_.forward(g.Bt[c], s.B[c]);
            ws_.dealias(s.v[c], cutoff());
            ws_.dealias(s.E[c], cutoff());
            ws_.dealias(s.B[c], cutoff());
        }
    }

    void to_state(const SpecState& s, GridState& g) {
        g.n_per_axis = cfg_.n_per_axis;
        g.box_length = cfg_.box_length;
        ws_.inverse(s.rho, g.rho);
        for (int c = 0; c < 3; ++c) {
            ws_.inverse(s.v[c], g.v[c]);
            ws_.inverse(s.E[c], g.Et[c]);
            ws_.inverse(s.B[c], g.Bt[c]);
        }
    }

    /// out = (i k_axis) f
    void mul_ik(const std::vector<complex>& f, int axis, std::vector<complex>& out) const {
        out.resize(f.size());
        const int n = ws_.n(), nzh = n / 2 + 1;
        const double unit = cfg_.k_unit();
        std::size_t idx = 0;
        for (int ix = 0; ix < n; ++ix) {
            const double kx = unit * ws_.signed_index(ix);
            for (int iy = 0; iy < n; ++iy) {
                const double ky = unit * ws_.signed_index(iy);
                for (int iz = 0; iz < nzh; ++iz, ++idx) {
                    const double ka = axis == 0 ? kx : (axis == 1 ? ky : unit * iz);
                    const complex val = f[idx];
                    out[idx] = complex(-ka * val.imag(), ka * val.real());
                }
            }
        }
    }

    /// out = -|k|^2 f
    void mul_neg_k2(const std::vector<complex>& f, std::vector<complex>& out) const {
        out.resize(f.size());
        const int n = ws_.n(), nzh = n / 2 + 1;
        const double unit = cfg_.k_unit();
        std::size_t idx = 0;
        for (int ix = 0; ix < n; ++ix) {
            const double kx = unit * ws_.signed_index(ix);
            for (int iy = 0; iy < n; ++iy) {
                const double ky = unit * ws_.signed_index(iy);
                const double kxy2 = kx * kx + ky * ky;
                for (int iz = 0; iz < nzh; ++iz, ++idx) {
                    const double kz = unit * iz;
                    out[idx] = -(kxy2 + kz * kz) * f[idx];
                }
            }
        }
    }

    /**
     * Spectral tendencies at the given state. `phys` supplies the pointwise
     * factors, `spec` the derivatives; both must describe the same fields.
     */
    void rhs_spec(const GridState& phys, const SpecState& spec, SpecTend& out) {
        const double beta2 = p_.beta * p_.beta;  // background density n_b
        const double rho_min = *std::min_element(phys.rho.begin(), phys.rho.end());
        if (rho_min + beta2 < 0.1 * beta2)
            throw SimulationError("vacuum guard: rho + n_b fell below 0.1 n_b", phys.time);

        const std::size_t m = ws_.n_real();
        std::vector<complex> scratch;

        std::array<std::vector<double>, 3> grad_rho, lap_v;
        std::array<std::array<std::vector<double>, 3>, 3> dv;  // dv[j][i] = d_j v_i
        for (int c = 0; c < 3; ++c) {
            mul_ik(spec.rho, c, scratch);
            ws_.inverse(scratch, grad_rho[c]);
            mul_neg_k2(spec.v[c], scratch);
            ws_.inverse(scratch, lap_v[c]);
            for (int j = 0; j < 3; ++j) {
                mul_ik(spec.v[c], j, scratch);
                ws_.inverse(scratch, dv[j][c]);
            }
        }

        // w = rho v transformed once; h3 = w/beta and h1 = -(gamma/beta^2) div w
        // share it, which makes div h3 + (beta/gamma) h1 vanish identically.
        std::vector<double> prod(m);
        for (int c = 0; c < 3; ++c) {
            for (std::size_t x = 0; x < m; ++x) prod[x] = phys.rho[x] * phys.v[c][x];
            ws_.forward(prod, out.h3[c]);
            ws_.dealias(out.h3[c], cutoff());
        }
        {
            const std::size_t ms = ws_.n_spec();
            out.h1.assign(ms, complex{});
            const int n = ws_.n(), nzh = n / 2 + 1;
            const double unit = cfg_.k_unit();
            const double c1 = -p_.gamma / beta2;
            std::size_t idx = 0;
            for (int ix = 0; ix < n; ++ix) {
                const double kx = unit * ws_.signed_index(ix);
                for (int iy = 0; iy < n; ++iy) {
                    const double ky = unit * ws_.signed_index(iy);
                    for (int iz = 0; iz < nzh; ++iz, ++idx) {
                        const double kz = unit * iz;
                        const complex kw = kx * out.h3[0][idx] + ky * out.h3[1][idx] +
                                           kz * out.h3[2][idx];
                        // c1 * i * (k . w)
                        out.h1[idx] = complex(-c1 * kw.imag(), c1 * kw.real());
                    }
                }
            }
            const double inv_beta = 1.0 / p_.beta;
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < ms; ++i) out.h3[c][i] *= inv_beta;
        }

        // velocity sources: advection, pressure bracket, Lorentz force,
        // density correction of the viscosity — all quadratic or higher
        const double g_over_b2 = p_.gamma / beta2;
        const double g_over_b = p_.gamma / p_.beta;
        const double Am2 = cfg_.pressure_index - 2.0;
        std::vector<double> h2c(m);
        for (int i = 0; i < 3; ++i) {
            const int j1 = (i + 1) % 3, j2 = (i + 2) % 3;
            for (std::size_t x = 0; x < m; ++x) {
                const double rho = phys.rho[x];
                const double adv = phys.v[0][x] * dv[0][i][x] + phys.v[1][x] * dv[1][i][x] +
                                   phys.v[2][x] * dv[2][i][x];
                // (1 + rho/n_b)^(A-2) - 1, evaluated without cancellation
                const double press = std::expm1(Am2 * std::log1p(rho / beta2));
                const double lorentz =
                    phys.v[j1][x] * phys.Bt[j2][x] - phys.v[j2][x] * phys.Bt[j1][x];
                h2c[x] = -g_over_b2 * adv - p_.gamma * press * grad_rho[i][x] -
                         g_over_b * lorentz - p_.mu * (rho / (rho + beta2)) * lap_v[i][x];
            }
            ws_.forward(h2c, out.h2[i]);
            ws_.dealias(out.h2[i], cutoff());
        }
    }

    /**
     * Replace the parallel electric part by the Gauss value from rho and
     * strip the parallel magnetic part; k = 0 means are untouched.
     */
    void project(SpecState& s) const {
        const double slave = p_.beta / p_.gamma;
        for (const ModeRef& m : modes_) {
            const double k2 = m.k[0] * m.k[0] + m.k[1] * m.k[1] + m.k[2] * m.k[2];
            if (k2 == 0.0) continue;
            FourierMode f = get_mode(s, m);
            const CVec3 kvec{complex(m.k[0]), complex(m.k[1]), complex(m.k[2])};
            const complex kE = dot(m.k, f.E) / k2;
            const complex kB = dot(m.k, f.B) / k2;
            // i k.E = -(beta/gamma) rho  =>  (k.E)/|k|^2 = i (beta/gamma) rho / |k|^2
            const complex gauss(-slave * f.n.imag() / k2, slave * f.n.real() / k2);
            f.E = f.E - kE * kvec + gauss * kvec;
            f.B = f.B - kB * kvec;
            set_mode(s, m, f);
        }
    }

    /// One exponential two-stage step of size h (mutates state in place).
    void step(GridState& state, double h) {
        SpecState S;
        to_spec(state, S);
        SpecTend T1;
        rhs_spec(state, S, T1);

        const std::size_t ms = ws_.n_spec();
        SpecState GU, GN, mid_spec;
        GU.assign(ms);
        GN.assign(ms);
        mid_spec.assign(ms);
        for (const ModeRef& m : modes_) {
            const GreenEval g = green_eval(m.k, p_, h);
            const FourierMode gu = apply_green_eval(g, p_, get_mode(S, m));
            const FourierMode gn = apply_green_eval(g, p_, tend_mode(T1, m));
            set_mode(GU, m, gu);
            set_mode(GN, m, gn);
            set_mode(mid_spec, m, axpy(gu, h, gn));
        }

        GridState mid = state;
        to_state(mid_spec, mid);
        mid.time = state.time + h;
        SpecTend T2;
        rhs_spec(mid, mid_spec, T2);

        SpecState next;
        next.assign(ms);
        for (const ModeRef& m : modes_) {
            FourierMode f = get_mode(GU, m);
            f = axpy(f, 0.5 * h, get_mode(GN, m));
            f = axpy(f, 0.5 * h, tend_mode(T2, m));
            set_mode(next, m, f);
        }
        project(next);
        to_state(next, state);
        state.time += h;
    }

    const PhysParams& params() const { return p_; }
    const GridConfig& config() const { return cfg_; }

private:
    PhysParams p_;
    GridConfig cfg_;
    SpectralWorkspace ws_;
    std::vector<ModeRef> modes_;
};

// ---------------------------------------------------------------------------
// Shared spectral reductions.
// ---------------------------------------------------------------------------

template <typename F>
void for_each_coeff(const SpectralWorkspace& ws, F&& f) {
    const int n = ws.n(), nzh = n / 2 + 1;
    const double unit = 2.0 * std::numbers::pi / ws.box_length();
    std::size_t idx = 0;
    for (int ix = 0; ix < n; ++ix) {
        const double kx = unit * ws.signed_index(ix);
        for (int iy = 0; iy < n; ++iy) {
            const double ky = unit * ws.signed_index(iy);
            for (int iz = 0; iz < nzh; ++iz, ++idx) {
                f(idx, Vec3{kx, ky, unit * iz}, ws.hermitian_weight(iz));
            }
        }
    }
}

ConstraintResiduals residuals_core(const SpectralWorkspace& ws, const SpecState& s,
                                   const PhysParams& p) {
    const double slave = p.beta / p.gamma;
    double gauss_num = 0.0, E2 = 0.0, divB_num = 0.0, B2 = 0.0;
    for_each_coeff(ws, [&](std::size_t i, const Vec3& k, double wh) {
        const CVec3 E{s.E[0][i], s.E[1][i], s.E[2][i]};
        const CVec3 B{s.B[0][i], s.B[1][i], s.B[2][i]};
        const complex kE = dot(k, E), kB = dot(k, B);
        const complex gauss = complex(0.0, 1.0) * kE + slave * s.rho[i];
        gauss_num += wh * std::norm(gauss);
        divB_num += wh * std::norm(kB);
        E2 += wh * norm2(E);
        B2 += wh * norm2(B);
    });
    ConstraintResiduals r;
    r.gauss = E2 > 0.0 ? std::sqrt(gauss_num / E2) : 0.0;
    r.div_B = B2 > 0.0 ? std::sqrt(divB_num / B2) : 0.0;
    return r;
}

/// W_m(|k|^2) = sum_{j=0..m} |k|^(2j); zero for m < 0.
double sobolev_weight(double k2, int m) {
    if (m < 0) return 0.0;
    double sum = 1.0, term = 1.0;
    for (int j = 1; j <= m; ++j) {
        term *= k2;
        sum += term;
    }
    return sum;
}

EnergyReport energy_core(const SpectralWorkspace& ws, const SpecState& s,
                         const PhysParams& p, int N, const LyapunovWeights& w) {
    EnergyReport rep;
    rep.N_order = N;
    for_each_coeff(ws, [&](std::size_t i, const Vec3& k, double wh) {
        const complex rho = s.rho[i];
        const CVec3 v{s.v[0][i], s.v[1][i], s.v[2][i]};
        const CVec3 E{s.E[0][i], s.E[1][i], s.E[2][i]};
        const CVec3 B{s.B[0][i], s.B[1][i], s.B[2][i]};
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        const double U2 = std::norm(rho) + norm2(v) + norm2(E) + norm2(B);
        if (U2 == 0.0) return;

        // cross-term integrands: <gamma grad n, u>, <curl E, curl u>, <-curl B, E>
        const complex kv = dot(k, v);
        const double c1 = -p.gamma * std::imag(rho * std::conj(kv));  // Re(i gamma rho conj(k.v))
        const double c2 = std::real(inner(cross(k, E), cross(k, v)));
        const double c3 = std::imag(inner(cross(k, B), E));  // Re(-i (k x B | E))

        const double WN = sobolev_weight(k2, N);
        const double WN1 = sobolev_weight(k2, N - 1);
        const double WN2 = sobolev_weight(k2, N - 2);
        const double WN3 = sobolev_weight(k2, N - 3);
        const double WN4 = sobolev_weight(k2, N - 4);

        rep.E_N += wh * (WN * U2 + w.kappa1 * WN1 * c1 + w.kappa1 * WN2 * c2 +
                         w.kappa1 * w.kappa2 * (WN2 - 1.0) * c3);
        rep.D_N += wh * (WN * std::norm(rho) + k2 * WN * norm2(v) + k2 * WN2 * norm2(E) +
                         k2 * k2 * WN3 * norm2(B));
        rep.E_N_h += wh * ((WN - 1.0) * U2 + w.kappa1 * (WN1 - 1.0) * c1 +
                           w.kappa2 * (WN2 - 1.0) * c2 +
                           w.kappa1 * w.kappa2 * (WN2 - 1.0 - k2) * c3);
        rep.D_N_h += wh * (k2 * WN1 * std::norm(rho) + k2 * k2 * WN1 * norm2(v) +
                           k2 * k2 * WN3 * norm2(E) + k2 * k2 * k2 * WN4 * norm2(B));
    });
    return rep;
}

double field_mean(const std::vector<double>& f) {
    double s = 0.0;
    for (double x : f) s += x;
    return s / static_cast<double>(f.size());
}

double field_mean_sq(const std::vector<double>& f) {
    double s = 0.0;
    for (double x : f) s += x * x;
    return s / static_cast<double>(f.size());
}

double vector_norm(const std::array<std::vector<double>, 3>& f) {
    return std::sqrt(field_mean_sq(f[0]) + field_mean_sq(f[1]) + field_mean_sq(f[2]));
}

double total_norm(const GridState& g) {
    double s = field_mean_sq(g.rho);
    for (int c = 0; c < 3; ++c)
        s += field_mean_sq(g.v[c]) + field_mean_sq(g.Et[c]) + field_mean_sq(g.Bt[c]);
    return std::sqrt(s);
}

}  // namespace

// ---------------------------------------------------------------------------
// Public operations.
// ---------------------------------------------------------------------------

Tendencies nonlinear_rhs(const PhysParams& params, const GridState& state,
                         const GridConfig& config) {
    state.require_dims(config);
    Engine eng(params, config);
    SpecState S;
    eng.to_spec(state, S);
    SpecTend T;
    eng.rhs_spec(state, S, T);
    Tendencies out;
    eng.ws().inverse(T.h1, out.h1);
    for (int c = 0; c < 3; ++c) {
        eng.ws().inverse(T.h2[c], out.h2[c]);
        eng.ws().inverse(T.h3[c], out.h3[c]);
    }
    return out;
}

double tendency_compat_residual(const PhysParams& params, const GridConfig& config,
                                const Tendencies& tend) {
    params.validate();
    config.validate();
    SpectralWorkspace ws(config.n_per_axis, config.box_length);
    if (tend.h1.size() != ws.n_real() || tend.h3[0].size() != ws.n_real())
        throw std::invalid_argument("tendency_compat_residual: field size mismatch");
    std::vector<complex> h1;
    std::array<std::vector<complex>, 3> h3;
    ws.forward(tend.h1, h1);
    for (int c = 0; c < 3; ++c) ws.forward(tend.h3[c], h3[c]);

    const double slave = params.beta / params.gamma;
    double num = 0.0, den = 0.0;
    for_each_coeff(ws, [&](std::size_t i, const Vec3& k, double wh) {
        const CVec3 w{h3[0][i], h3[1][i], h3[2][i]};
        const complex div = complex(0.0, 1.0) * dot(k, w);
        num += wh * std::norm(div + slave * h1[i]);
        den += wh * norm2(w);
    });
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

GridState constraint_project(const GridState& state, const PhysParams& params) {
    params.validate();
    SpectralWorkspace ws(state.n_per_axis, state.box_length);
    if (state.rho.size() != ws.n_real())
        throw std::invalid_argument("constraint_project: field size mismatch");
    const int full_band = state.n_per_axis / 2 - 1;
    const std::vector<ModeRef> modes = build_mode_list(ws, full_band);

    SpecState s;
    ws.forward(state.rho, s.rho);
    ws.dealias(s.rho, full_band);  // the solver's band never holds Nyquist content
    for (int c = 0; c < 3; ++c) {
        ws.forward(state.v[c], s.v[c]);
        ws.forward(state.Et[c], s.E[c]);
        ws.forward(state.Bt[c], s.B[c]);
        ws.dealias(s.v[c], full_band);
        ws.dealias(s.E[c], full_band);
        ws.dealias(s.B[c], full_band);
    }

    const double slave = params.beta / params.gamma;
    for (const ModeRef& m : modes) {
        const double k2 = m.k[0] * m.k[0] + m.k[1] * m.k[1] + m.k[2] * m.k[2];
        if (k2 == 0.0) continue;
        FourierMode f = get_mode(s, m);
        const CVec3 kvec{complex(m.k[0]), complex(m.k[1]), complex(m.k[2])};
        const complex kE = dot(m.k, f.E) / k2;
        const complex kB = dot(m.k, f.B) / k2;
        const complex gauss(-slave * f.n.imag() / k2, slave * f.n.real() / k2);
        f.E = f.E - kE * kvec + gauss * kvec;
        f.B = f.B - kB * kvec;
        set_mode(s, m, f);
    }

    GridState out = state;
    ws.inverse(s.rho, out.rho);
    for (int c = 0; c < 3; ++c) {
        ws.inverse(s.v[c], out.v[c]);
        ws.inverse(s.E[c], out.Et[c]);
        ws.inverse(s.B[c], out.Bt[c]);
    }
    return out;
}

ConstraintResiduals constraint_residuals(const PhysParams& params, const GridState& state) {
    params.validate();
    SpectralWorkspace ws(state.n_per_axis, state.box_length);
    if (state.rho.size() != ws.n_real())
        throw std::invalid_argument("constraint_residuals: field size mismatch");
    SpecState s;
    ws.forward(state.rho, s.rho);
    for (int c = 0; c < 3; ++c) {
        ws.forward(state.Et[c], s.E[c]);
        ws.forward(state.Bt[c], s.B[c]);
        s.v[c].assign(ws.n_spec(), complex{});
    }
    return residuals_core(ws, s, params);
}

GridState step_etd(const PhysParams& params, const GridState& state,
                   const GridConfig& config) {
    state.require_dims(config);
    Engine eng(params, config);
    GridState out = state;
    eng.step(out, config.dt);
    return out;
}

GridState linear_flow(const PhysParams& params, const GridState& state,
                      const GridConfig& config, double t) {
    if (!(t >= 0.0)) throw std::domain_error("linear_flow: t must be nonnegative");
    state.require_dims(config);
    Engine eng(params, config);
    SpecState S;
    eng.to_spec(state, S);
    for (const ModeRef& m : eng.modes()) {
        const GreenEval g = green_eval(m.k, params, t);
        set_mode(S, m, apply_green_eval(g, params, get_mode(S, m)));
    }
    GridState out = state;
    eng.to_state(S, out);
    out.time = state.time + t;
    return out;
}

EnergyReport energy_functionals(const PhysParams& params, const GridState& state,
                                int N_order, const LyapunovWeights& weights) {
    params.validate();
    weights.validate();
    if (N_order < 4)
        throw std::domain_error(
            "energy_functionals: N_order must be at least 4 (indices reach N-4)");
    if (N_order > state.n_per_axis / 4)
        throw std::domain_error(
            "energy_functionals: N_order exceeds the resolvable order n_per_axis/4");
    SpectralWorkspace ws(state.n_per_axis, state.box_length);
    if (state.rho.size() != ws.n_real())
        throw std::invalid_argument("energy_functionals: field size mismatch");
    SpecState s;
    ws.forward(state.rho, s.rho);
    for (int c = 0; c < 3; ++c) {
        ws.forward(state.v[c], s.v[c]);
        ws.forward(state.Et[c], s.E[c]);
        ws.forward(state.Bt[c], s.B[c]);
    }
    return energy_core(ws, s, params, N_order, weights);
}

GridState profile_state(const PhysParams& params, const GridConfig& config,
                        const RadialProfile& profile) {
    Engine eng(params, config);
    SpecState S;
    S.assign(eng.ws().n_spec());
    const complex amp(config.amplitude, 0.0);
    for (const ModeRef& m : eng.modes()) {
        if (m.k[0] == 0.0 && m.k[1] == 0.0 && m.k[2] == 0.0) continue;  // mean-free
        FourierMode f = profile_mode(profile, params, m.k);
        f.n *= amp;
        f.u = amp * f.u;
        f.E = amp * f.E;
        f.B = amp * f.B;
        set_mode(S, m, f);
    }
    GridState out = zero_state(config);
    eng.to_state(S, out);
    out.time = 0.0;
    return out;
}

namespace {

SimSeries run_simulation(const PhysParams& params, const GridConfig& config, GridState st,
                         int stride, int n_order, const LyapunovWeights& weights) {
    if (stride < 1) throw std::domain_error("simulate: diagnostics_stride must be >= 1");
    weights.validate();

    Engine eng(params, config);
    SimSeries out;

    // settle the initial state onto the band and the constraint manifold
    {
        SpecState S;
        eng.to_spec(st, S);
        eng.project(S);
        eng.to_state(S, st);
    }

    const double t_start = st.time;
    const double t_stop = t_start + config.t_end;
    const double mass0 = field_mean(st.rho);
    const double rho0_norm = std::sqrt(field_mean_sq(st.rho));
    const double total0 = total_norm(st);
    double mass_dev = 0.0;

    auto record = [&](const GridState& g) {
        SpecState S;
        eng.to_spec(g, S);
        const double t = g.time;
        const double nr = std::sqrt(field_mean_sq(g.rho));
        const double nv = vector_norm(g.v);
        const double nE = vector_norm(g.Et);
        const double nB = vector_norm(g.Bt);
        const double mass = field_mean(g.rho);
        const ConstraintResiduals res = residuals_core(eng.ws(), S, params);
        const EnergyReport rep = energy_core(eng.ws(), S, params, n_order, weights);

        out.t.push_back(t);
        out.norm_rho.push_back(nr);
        out.norm_v.push_back(nv);
        out.norm_E.push_back(nE);
        out.norm_B.push_back(nB);
        out.mass.push_back(mass);
        out.gauss_residual.push_back(res.gauss);
        out.div_B_residual.push_back(res.div_B);
        out.energy.push_back(rep);

        const double w34 = std::pow(1.0 + t, 0.75);
        out.X_weighted.push_back(w34 * rep.E_N);
        out.Y_weighted.push_back(std::pow(1.0 + t, 1.25) * (nv * nv + rep.E_N_h));
        out.rho_weighted.push_back((1.0 + t) * nr);
        out.E_weighted.push_back(w34 * nE / std::log(3.0 + t));

        mass_dev = std::max(mass_dev, std::abs(mass - mass0));
    };

    // energy_functionals' own bounds, checked up front so a bad n_order
    // fails before any stepping
    if (n_order < 4 || n_order > config.n_per_axis / 4)
        throw std::domain_error("simulate: n_order must lie in [4, n_per_axis/4]");

    record(st);

    const double eps_t = 1e-12 * std::max(1.0, std::abs(t_stop));
    long step_index = 0;
    while (t_stop - st.time > eps_t) {
        const double h = std::min(config.dt, t_stop - st.time);

        double v_max = 0.0;
        for (int c = 0; c < 3; ++c)
            for (double x : st.v[c]) v_max = std::max(v_max, std::abs(x));
        double cap = 0.5;
        if (v_max > 0.0)
            cap = std::min(cap, 0.25 * config.box_length / (config.n_per_axis * v_max));
        if (h > cap + 1e-15) {
            out.aborted = true;
            out.abort_reason = "time step exceeds the advective stability cap";
            break;
        }

        try {
            eng.step(st, h);
        } catch (const SimulationError& e) {
            out.aborted = true;
            out.abort_reason = e.what();
            break;
        }
        ++step_index;

        const bool final_step = !(t_stop - st.time > eps_t);
        if (step_index % stride == 0 || final_step) record(st);

        if (total0 > 0.0 && total_norm(st) > 10.0 * total0) {
            if (!(step_index % stride == 0 || final_step)) record(st);
            out.aborted = true;
            out.abort_reason = "total norm grew beyond 10x its initial value";
            break;
        }
    }

    const double denom = std::max(std::abs(mass0), rho0_norm);
    out.mass_drift_rel = denom > 0.0 ? mass_dev / denom : 0.0;
    return out;
}

}  // namespace

SimSeries simulate(const PhysParams& params, const GridConfig& config,
                   const RadialProfile& initial, int diagnostics_stride, int n_order,
                   const LyapunovWeights& weights) {
    return run_simulation(params, config, profile_state(params, config, initial),
                          diagnostics_stride, n_order, weights);
}

SimSeries simulate(const PhysParams& params, const GridConfig& config,
                   const GridState& initial, int diagnostics_stride, int n_order,
                   const LyapunovWeights& weights) {
    initial.require_dims(config);
    return run_simulation(params, config, initial, diagnostics_stride, n_order, weights);
}

}  // namespace nsm
