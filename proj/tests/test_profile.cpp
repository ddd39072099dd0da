#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "nsm/profile.hpp"

using namespace nsm;

TEST_CASE("radial envelope catalog") {
  const RadialShape g = gaussian_shape(1.0);
  CHECK(g(0.0) == 1.0);
  CHECK(g(2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(g.support_radius() == doctest::Approx(8.0));

  const RadialShape b = bump_shape(2.0);
  CHECK(b(0.0) == 1.0);
  CHECK(b(1.0) == doctest::Approx(std::exp(1.0 - 1.0 / (1.0 - 0.25))).epsilon(1e-15));
  CHECK(b(2.0) == 0.0);
  CHECK(b(3.5) == 0.0);
  CHECK(b.support_radius() == doctest::Approx(2.0));

  const RadialShape p = power_cutoff_shape(2.5, 5.0);
  CHECK(p(0.0) == 1.0);
  CHECK(p(1.0) == doctest::Approx(std::pow(2.0, -1.25)).epsilon(1e-15));
  CHECK(p(6.0) == 0.0);
  CHECK(p.support_radius() == doctest::Approx(5.0));

  CHECK_THROWS_AS(gaussian_shape(0.0), std::invalid_argument);
  CHECK_THROWS_AS(bump_shape(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(power_cutoff_shape(2.5, 0.0), std::invalid_argument);
}

TEST_CASE("profile modes satisfy both linear constraints at every k") {
  const PhysParams p = reference_params();
  RadialProfile prof;
  prof.shape = gaussian_shape(1.0);
  prof.w_n = 1.0;
  prof.w_u = 0.8;
  prof.w_E = 0.7;
  prof.w_B = 0.6;

  const Vec3 ks[] = {{0.3, 0.0, 0.0},  {0.0, 1.7, 0.0},   {0.6, -0.8, 0.0},
                     {0.2, 0.3, -0.9}, {-1.1, 2.0, 0.35}, {4.0, 4.0, 4.0}};
  for (const Vec3& k : ks) {
    const FourierMode m = profile_mode(prof, p, k);
    CHECK(constraints_ok(m, p, 1e-12));
  }
}

TEST_CASE("profile mode components at an axis-aligned wavevector") {
  PhysParams p = reference_params();
  p.beta = 2.0;  // make the Gauss-law factor beta/gamma visible
  RadialProfile prof;
  prof.shape = gaussian_shape(1.0);
  prof.w_n = 1.0;
  prof.w_u = 0.8;
  prof.w_E = 0.7;
  prof.w_B = 0.6;

  // k along z: c_B = (0,0,1) projects away entirely, c_E = (0,1,0) survives.
  const Vec3 k{0.0, 0.0, 2.0};
  const double f = std::exp(-2.0);
  const FourierMode m = profile_mode(prof, p, k);

  CHECK(m.n.real() == doctest::Approx(f).epsilon(1e-15));
  CHECK(m.n.imag() == 0.0);
  CHECK(m.u.x.real() == doctest::Approx(0.8 * f).epsilon(1e-15));
  CHECK(std::abs(m.u.y) == 0.0);
  CHECK(std::abs(m.u.z) == 0.0);
  CHECK(std::abs(m.B.x) + std::abs(m.B.y) + std::abs(m.B.z) < 1e-16);
  CHECK(m.E.y.real() == doctest::Approx(0.7 * f).epsilon(1e-15));
  // Longitudinal part i (beta/gamma) (n/|k|) khat.
  CHECK(m.E.z.imag() == doctest::Approx(2.0 * f / 2.0).epsilon(1e-15));
  CHECK(m.E.z.real() == 0.0);
}

TEST_CASE("zero-wavevector profile mode is constraint-neutral") {
  const PhysParams p = reference_params();
  RadialProfile prof;
  prof.shape = gaussian_shape(1.0);
  prof.w_n = 1.0;
  prof.w_u = 0.5;
  prof.w_E = 0.25;
  prof.w_B = 0.125;

  const FourierMode m = profile_mode(prof, p, Vec3{0.0, 0.0, 0.0});
  CHECK(std::abs(m.n) == 0.0);  // mean-free density
  CHECK(m.u.x.real() == doctest::Approx(0.5));
  CHECK(m.E.y.real() == doctest::Approx(0.25));
  CHECK(m.B.z.real() == doctest::Approx(0.125));
}

TEST_CASE("transverse-only profile isolates the electromagnetic block") {
  const PhysParams p = reference_params();
  RadialProfile prof;
  prof.shape = bump_shape(3.0);
  prof.w_E = 1.0;

  const Vec3 k{0.5, 0.5, 0.0};
  const FourierMode m = profile_mode(prof, p, k);
  CHECK(std::abs(m.n) == 0.0);
  CHECK(norm2(m.u) == 0.0);
  CHECK(norm2(m.B) == 0.0);
  // E is orthogonal to k and has the projected template length: the default
  // template (0,1,0) loses half its squared length against khat = (1,1,0)/sqrt2.
  CHECK(std::abs(dot(k, m.E)) < 1e-15);
  const double f = prof.shape(norm(k));
  CHECK(std::sqrt(norm2(m.E)) == doctest::Approx(f / std::sqrt(2.0)).epsilon(1e-14));
}
