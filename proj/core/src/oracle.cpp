#include "nsm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "nsm/greenfn.hpp"
#include "nsm/threading.hpp"

namespace nsm {

OdeRhs linearized_rhs(const PhysParams& params, const Vec3& k) {
  params.validate();
  const double gamma = params.gamma;
  const double beta = params.beta;
  const double mu_k2 = params.mu * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
  const Vec3 kv = k;
  return [gamma, beta, mu_k2, kv](double /*t*/, std::span<const complex> y,
                                  std::span<complex> dy) {
    constexpr complex I{0.0, 1.0};
    const complex n = y[0];
    const CVec3 u{y[1], y[2], y[3]};
    const CVec3 E{y[4], y[5], y[6]};
    const CVec3 B{y[7], y[8], y[9]};

    dy[0] = -I * gamma * dot(kv, u);

    const complex cn = -I * gamma * n;
    const CVec3 du = CVec3{cn * kv[0], cn * kv[1], cn * kv[2]} - beta * E - mu_k2 * u;
    const CVec3 dE = I * cross(kv, B) + beta * u;
    const CVec3 dB = complex{0.0, -1.0} * cross(kv, E);

    for (int j = 0; j < 3; ++j) {
      dy[1 + j] = du[j];
      dy[4 + j] = dE[j];
      dy[7 + j] = dB[j];
    }
  };
}

void pack_mode(const FourierMode& mode, std::span<complex> out) {
  out[0] = mode.n;
  for (int j = 0; j < 3; ++j) {
    out[1 + j] = mode.u[j];
    out[4 + j] = mode.E[j];
    out[7 + j] = mode.B[j];
  }
}

FourierMode unpack_mode(const Vec3& k, std::span<const complex> state) {
  FourierMode m;
  m.k = k;
  m.n = state[0];
  for (int j = 0; j < 3; ++j) {
    m.u[j] = state[1 + j];
    m.E[j] = state[4 + j];
    m.B[j] = state[7 + j];
  }
  return m;
}

FourierMode integrate_mode(const PhysParams& params, const FourierMode& mode0, double t,
                           double tol, OdeStats* stats) {
  if (!(tol >= 1.0e-13 && tol <= 1.0e-6)) {
    throw std::invalid_argument("integrate_mode: tol must lie in [1e-13, 1e-6]");
  }
  if (!(t >= 0.0)) {
    throw std::invalid_argument("integrate_mode: t must be nonnegative");
  }

  std::vector<complex> state(10);
  pack_mode(mode0, state);

  // The absolute floor is anchored well below the initial amplitude so that
  // strongly decayed components stay accurate relative to the whole mode.
  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = std::max(1.0e-4 * tol * mode0.norm(), 1.0e-300);

  const OdeStats run = integrate_ode(linearized_rhs(params, mode0.k), state, 0.0, t, opt);
  if (stats != nullptr) *stats = run;
  return unpack_mode(mode0.k, state);
}

OdeReport verify_green_vs_oracle(const PhysParams& params, std::span<const Vec3> k_samples,
                                 std::span<const double> t_samples, int n_random_modes,
                                 std::uint64_t seed, double tol) {
  if (k_samples.empty() || t_samples.empty() || n_random_modes <= 0) {
    throw std::invalid_argument("verify_green_vs_oracle: sample lists must be nonempty");
  }

  struct Sample {
    double err = -1.0;
    double t = 0.0;
    Vec3 k{0.0, 0.0, 0.0};
  };

  const std::size_t modes_per_k = static_cast<std::size_t>(n_random_modes);
  const std::size_t n_tasks = k_samples.size() * modes_per_k;
  std::vector<Sample> worst(n_tasks);

  parallel_for(n_tasks, [&](std::size_t task) {
    const std::size_t ik = task / modes_per_k;
    const std::size_t im = task % modes_per_k;
    const Vec3& k = k_samples[ik];
    const std::uint64_t mode_seed = seed + 1000003ull * ik + im;
    const FourierMode mode0 = random_constrained_mode(k, params, mode_seed);

    Sample& w = worst[task];
    for (const double t : t_samples) {
      const FourierMode ref = integrate_mode(params, mode0, t, tol);
      const FourierMode prop = apply_green(mode0, params, t);
      const double ref_norm = ref.norm();
      const double diff = (prop - ref).norm();
      const double rel = ref_norm > 0.0 ? diff / ref_norm : diff;
      if (rel > w.err) {
        w.err = rel;
        w.t = t;
        w.k = k;
      }
    }
  });

  OdeReport report;
  report.tolerance_used = tol;
  report.n_samples = n_tasks * t_samples.size();
  for (const Sample& w : worst) {
    if (w.err > report.max_rel_error) {
      report.max_rel_error = w.err;
      report.worst_t = w.t;
      report.worst_k = w.k;
    }
  }
  return report;
}

}  // namespace nsm
