#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsm/grid.hpp"
#include "nsm/lyapunov.hpp"
#include "nsm/params.hpp"
#include "nsm/profile.hpp"

namespace nsm {

/// Thrown when a run leaves the admissible regime (vacuum guard violated).
struct SimulationError : std::runtime_error {
    double time = 0.0;
    SimulationError(const std::string& msg, double t) : std::runtime_error(msg), time(t) {}
};

/**
 * Physical-space tendencies of the quadratic (and higher) part of the
 * evolution: h1 sources the density equation, h2 the velocity equation,
 * h3 the electric-field equation; the magnetic equation has none.
 */
struct Tendencies {
    std::vector<double> h1;
    std::array<std::vector<double>, 3> h2{}, h3{};
};

/**
 * Pseudospectral evaluation of the nonlinear sources at the given state:
 *
 *   h1 = -(gamma/beta^2) div(rho v)
 *   h2 = -(gamma/beta^2) (v.grad) v
 *        - (beta^2/gamma) (grad P(rho+n_b)/(rho+n_b) - P'(n_b)/n_b grad rho)
 *        - (gamma/beta) v x Bt
 *        + nu (1/(rho+n_b) - 1/n_b) lap v
 *   h3 = (1/beta) rho v
 *
 * with n_b = beta^2 and nu = mu beta^2. The pressure law is the power law
 * P(n) = (gamma^2 beta^(2-2A) / A) n^A with A = config.pressure_index; the
 * scale is pinned so that P'(n_b) = gamma^2, which collapses the pressure
 * bracket to -gamma ((1 + rho/beta^2)^(A-2) - 1) grad rho — quadratic and
 * higher in rho, so the linear/nonlinear split is exact for any index.
 *
 * Products are formed in physical space from the (band-limited) input
 * fields and the results are dealiased. h1 and h3 are derived from the same
 * dealiased transform of rho v, making div h3 = -(beta/gamma) h1 an identity
 * up to round-off.
 *
 * Throws SimulationError when min(rho) + n_b < 0.1 n_b (vacuum guard).
 */
Tendencies nonlinear_rhs(const PhysParams& params, const GridState& state,
                         const GridConfig& config);

/// || div h3 + (beta/gamma) h1 || / || h3 ||, both sides spectral (0 when h3 = 0).
double tendency_compat_residual(const PhysParams& params, const GridConfig& config,
                                const Tendencies& tend);

/**
 * Per-mode enforcement of the divergence constraints: the parallel part of
 * Et is replaced by the Gauss-law value derived from rho, the parallel part
 * of Bt is removed, and the (unconstrained) k = 0 means are left alone.
 * The Nyquist planes are zeroed (the solver's band never contains them).
 * Idempotent up to round-off; a constraint-satisfying state passes through
 * unchanged to 1e-14.
 *
 * Note the periodic solvability condition: Gauss's law integrates to
 * mean(rho) = 0 on the torus, so a density mean is an obstruction no choice
 * of Et can remove. The projector does not touch means; such a state keeps a
 * residual floor of |mean rho| in constraint_residuals. Profile initial data
 * is mean-free by construction and never sees this.
 */
GridState constraint_project(const GridState& state, const PhysParams& params);

/// Relative spectral residuals of the two constraints (0 when the field is 0).
struct ConstraintResiduals {
    double gauss = 0.0;  // ||div Et + (beta/gamma) rho|| / ||Et||
    double div_B = 0.0;  // ||div Bt|| / ||Bt||
};
ConstraintResiduals constraint_residuals(const PhysParams& params, const GridState& state);

/**
 * One step of the exponential two-stage scheme, dt = config.dt:
 *
 *   Utilde  = G(dt) U + dt G(dt) N(U)
 *   U(t+dt) = G(dt) U + dt/2 [ G(dt) N(U) + N(Utilde) ]
 *
 * where G is the exact Fourier-space propagator applied per retained mode
 * and N the dealiased nonlinear source. The linear flow is exact by
 * construction (the scheme degenerates to G alone when N = 0) and the
 * overall step is second order in dt. A constraint projection follows the
 * stage combination as a safety net — the sources themselves satisfy the
 * compatibility identity, so the flow already preserves the constraint
 * manifold to round-off.
 *
 * Propagates the vacuum-guard SimulationError from the source evaluations.
 */
GridState step_etd(const PhysParams& params, const GridState& state,
                   const GridConfig& config);

/**
 * Exact flow of the linearized system: every retained mode is propagated by
 * the closed-form Green's function for time t, nonlinear sources ignored.
 * Reference solution for linearization-consistency diagnostics.
 */
GridState linear_flow(const PhysParams& params, const GridState& state,
                      const GridConfig& config, double t);

/**
 * The two energy/dissipation functional pairs evaluated spectrally.
 * Derivative sums enter through radial multipliers: sums over derivative
 * orders j <= m become the weight W_m(k) = sum_{j<=m} |k|^{2j} per mode, the
 * natural spectral reading under which a single-mode state reduces to the
 * closed per-mode form (see energy_functionals).
 */
struct EnergyReport {
    double E_N = 0.0;    // energy functional with kappa cross terms
    double D_N = 0.0;    // dissipation functional paired with E_N
    double E_N_h = 0.0;  // high-order (mean-free) energy functional
    double D_N_h = 0.0;  // its dissipation counterpart
    int N_order = 0;
};

/**
 * Evaluate the functionals at derivative order N = N_order:
 *
 *   E_N   = ||U||_{H^N}^2 + kappa1 sum_{|a|<=N-1} <d^a (gamma grad n), d^a u>
 *           + kappa1 sum_{|a|<=N-2} <d^a curl E, d^a curl u>
 *           + kappa1 kappa2 sum_{1<=|a|<=N-2} <d^a (-curl B), d^a E>
 *   D_N   = ||n||_{H^N}^2 + ||grad u||_{H^N}^2 + ||grad E||_{H^{N-2}}^2
 *           + ||grad^2 B||_{H^{N-3}}^2
 *   E_N^h = the same with the |a| = 0 terms dropped and — following the
 *           source material literally — the curl-curl cross term carrying
 *           kappa2 alone, so E_N^h does not reduce to the seminorm at
 *           kappa1 = 0 (E_N does reduce to ||U||_{H^N}^2 exactly).
 *   D_N^h = ||grad n||_{H^{N-1}}^2 + ||grad^2 u||_{H^{N-1}}^2
 *           + ||grad^2 E||_{H^{N-3}}^2 + ||grad^3 B||_{H^{N-4}}^2
 *
 * Norms are mean-volume L2. Requires 4 <= N_order <= n_per_axis/4 (the
 * lower bound keeps every H index nonnegative, the upper one keeps the
 * weighted sums resolvable on the retained band).
 */
EnergyReport energy_functionals(const PhysParams& params, const GridState& state,
                                int N_order, const LyapunovWeights& weights = {});

/**
 * Band-limited initial data: every retained mode k != 0 is seeded with
 * config.amplitude times the profile's mode (constraints hold exactly by
 * construction); the k = 0 mode is left at zero, so profile runs start — and
 * stay — mean-free in every field.
 */
GridState profile_state(const PhysParams& params, const GridConfig& config,
                        const RadialProfile& profile);

/**
 * Stride-sampled diagnostics of a run. Weighted series echo the decay
 * bookkeeping of the whole-space theory: X = (1+t)^{3/4} E_N,
 * Y = (1+t)^{5/4} (||v||^2 + E_N^h), rho_weighted = (1+t) ||rho||,
 * E_weighted = (1+t)^{3/4} ||Et|| / ln(3+t).
 *
 * On a periodic box the spectrum is discrete and the slowest retained mode
 * sets an exponential floor, so these series are inspection aids only — the
 * whole-space algebraic rates are not expected to hold here (the pointwise
 * verification of those rates lives in the continuous-spectrum machinery).
 */
struct SimSeries {
    std::vector<double> t;
    std::vector<double> norm_rho, norm_v, norm_E, norm_B;  // mean-volume L2
    std::vector<double> mass;                              // spatial mean of rho
    std::vector<double> gauss_residual, div_B_residual;    // relative, post-step
    std::vector<EnergyReport> energy;
    std::vector<double> X_weighted, Y_weighted, rho_weighted, E_weighted;
    bool aborted = false;
    std::string abort_reason;
    double mass_drift_rel = 0.0;  // max |mass - mass0| / max(|mass0|, ||rho0||)
};

/**
 * March the state to t_start + t_end with step_etd's scheme, recording
 * diagnostics every diagnostics_stride steps (plus the initial and final
 * states). Before each step the advective stability cap
 * dt <= min(0.5, 0.25 box_length / (n_per_axis max|v|)) is rechecked.
 * Aborts — returning the partial series with `aborted` set and the reason
 * recorded — on the vacuum guard, on total-norm growth beyond 10x the
 * initial value, or on a cap violation.
 *
 * The profile overload starts from profile_state(...); the explicit-fields
 * overload dealiases and projects a copy of the given state first.
 */
SimSeries simulate(const PhysParams& params, const GridConfig& config,
                   const RadialProfile& initial, int diagnostics_stride = 1,
                   int n_order = 4, const LyapunovWeights& weights = {});
SimSeries simulate(const PhysParams& params, const GridConfig& config,
                   const GridState& initial, int diagnostics_stride = 1,
                   int n_order = 4, const LyapunovWeights& weights = {});

}  // namespace nsm
