#pragma once
// Brute-force reference path: direct adaptive ODE integration of the
// linearized Fourier-mode system.  This deliberately shares no code with the
// closed-form propagator -- it packs a mode into a flat complex vector, hands
// the right-hand side to a generic Runge-Kutta integrator, and unpacks the
// result.  Agreement between the two paths is the core correctness argument.

#include <cstdint>
#include <span>

#include "nsm/mode.hpp"
#include "nsm/ode.hpp"
#include "nsm/params.hpp"
#include "nsm/types.hpp"

namespace nsm {

/// Aggregate result of a propagator-versus-integrator comparison sweep.
struct OdeReport {
  double max_rel_error = 0.0;  ///< worst relative mismatch over all samples
  double worst_t = 0.0;        ///< time of the worst sample
  Vec3 worst_k{0.0, 0.0, 0.0};  ///< wavevector of the worst sample
  std::size_t n_samples = 0;   ///< number of (k, t, mode) triples compared
  double tolerance_used = 0.0; ///< local ODE tolerance of the sweep
};

/// Right-hand side of the linearized system at wavevector k:
///   dn/dt = -i gamma (k . u)
///   du/dt = -i gamma k n - beta E - mu |k|^2 u
///   dE/dt =  i (k x B) + beta u
///   dB/dt = -i (k x E)
/// State layout: [n, u0, u1, u2, E0, E1, E2, B0, B1, B2].
OdeRhs linearized_rhs(const PhysParams& params, const Vec3& k);

/// Packs a mode into the 10-component flat layout used by linearized_rhs.
void pack_mode(const FourierMode& mode, std::span<complex> out);

/// Inverse of pack_mode; the wavevector is supplied separately.
FourierMode unpack_mode(const Vec3& k, std::span<const complex> state);

/// Integrates mode0 forward by time t with local tolerance tol (required to
/// lie in [1e-13, 1e-6]).  The divergence constraints are NOT re-projected:
/// exact dynamics preserve them, so their residual doubles as a test.
/// If stats is non-null the integrator work counters are written there.
/// Throws std::invalid_argument on a bad tolerance or negative t, and
/// IntegrationError if the step size underflows.
FourierMode integrate_mode(const PhysParams& params, const FourierMode& mode0, double t,
                           double tol, OdeStats* stats = nullptr);

/// Compares apply_green against integrate_mode over the cartesian product of
/// k_samples, t_samples, and n_random_modes seeded constrained modes per
/// wavevector.  Relative error is ||green - ode|| / ||ode|| per sample (the
/// absolute error is used when the reference norm vanishes); the report
/// carries the maximum and where it occurred.  Samples are distributed over
/// worker threads; the reduction is order-independent.
OdeReport verify_green_vs_oracle(const PhysParams& params, std::span<const Vec3> k_samples,
                                 std::span<const double> t_samples, int n_random_modes,
                                 std::uint64_t seed, double tol = 1.0e-10);

}  // namespace nsm
