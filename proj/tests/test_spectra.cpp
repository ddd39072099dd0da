#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "nsm/params.hpp"
#include "nsm/spectra.hpp"

using namespace nsm;

namespace {

double cubic_residual(double a, double r, const complex& z) {
  const complex g = ((z + a * r) * z + (r + 1.0)) * z + a * r * r;
  return std::abs(g) / std::max(1.0, std::abs(z * z * z));
}

}  // namespace

TEST_CASE("acoustic roots: fixed values at the reference point") {
  const PhysParams p = reference_params();

  SUBCASE("k2 = 0 gives the pure plasma oscillation +-i") {
    const QuadraticRoots q = fluid_roots(0.0, p);
    CHECK(q.psi == doctest::Approx(-4.0));
    CHECK(std::abs(q.lambda_plus - complex(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(q.lambda_minus - complex(0.0, -1.0)) < 1e-15);
  }

  SUBCASE("k2 = 1: roots of z^2 + 0.1 z + 2") {
    const QuadraticRoots q = fluid_roots(1.0, p);
    CHECK(q.lambda_plus.real() == doctest::Approx(-0.05).epsilon(1e-13));
    CHECK(q.lambda_plus.imag() == doctest::Approx(1.4133294025102570).epsilon(1e-14));
    CHECK(std::abs(q.lambda_minus - std::conj(q.lambda_plus)) < 1e-14);
  }

  SUBCASE("k2 = 1e4: both roots real, split between slow and viscous branches") {
    const QuadraticRoots q = fluid_roots(1.0e4, p);
    CHECK(q.psi > 0.0);
    CHECK(q.lambda_plus.imag() == 0.0);
    CHECK(q.lambda_minus.imag() == 0.0);
    CHECK(q.lambda_plus.real() == doctest::Approx(-10.103072065153689).epsilon(1e-13));
    CHECK(q.lambda_minus.real() == doctest::Approx(-989.89692793484631).epsilon(1e-13));
  }

  SUBCASE("high-k limit of the slow branch is -gamma^2/mu") {
    // The slow acoustic root tends to -gamma^2/mu (= -10 here) with an
    // O(k^-2) correction, as forced by the Vieta product.
    const QuadraticRoots q = fluid_roots(1.0e6, p);
    CHECK(q.lambda_plus.real() == doctest::Approx(-10.0).epsilon(2e-2));
  }

  SUBCASE("negative k2 rejected") {
    CHECK_THROWS_AS(fluid_roots(-1.0, p), std::domain_error);
  }
}

TEST_CASE("acoustic roots: Vieta identities across parameters") {
  std::vector<PhysParams> ps = {reference_params(), PhysParams{2.0, 0.5, 0.3},
                                PhysParams{0.7, 3.0, 1.2}};
  for (const auto& p : ps) {
    for (double k2 = 1e-6; k2 <= 1e8; k2 *= 40.0) {
      const QuadraticRoots q = fluid_roots(k2, p);
      const complex sum = q.lambda_plus + q.lambda_minus;
      const complex prod = q.lambda_plus * q.lambda_minus;
      const double b = p.mu * k2;
      const double c = p.gamma * p.gamma * k2 + p.beta * p.beta;
      CHECK(std::abs(sum + b) <= 1e-12 * std::max(1.0, b));
      CHECK(std::abs(prod - c) <= 1e-12 * c);
      CHECK(q.lambda_plus.real() <= 0.0);
      CHECK(q.lambda_minus.real() <= 0.0);
    }
  }
}

TEST_CASE("transverse cubic resolvent: fixed values and guarantees") {
  SUBCASE("a=0.1, r=1") {
    const CubicDiscriminant d = cubic_discriminant(0.1, 1.0);
    CHECK(d.S == doctest::Approx(0.902).epsilon(1e-12));
    CHECK(d.R == doctest::Approx(860.5008).epsilon(1e-12));
  }
  SUBCASE("r -> 0 leaves only the 108 term") {
    CHECK(cubic_discriminant(0.1, 1e-12).R == doctest::Approx(108.0).epsilon(1e-9));
  }
  SUBCASE("R stays positive everywhere up to a = 1/sqrt(5)") {
    for (double r = 1e-4; r <= 1e4; r *= 2.7) {
      CHECK(cubic_discriminant(0.4, r).R > 0.0);
      CHECK(cubic_discriminant(1.0 / std::sqrt(5.0), r).R >= 0.0);
    }
  }
}

TEST_CASE("transverse cubic roots: fixed values") {
  SUBCASE("r = 0 limit") {
    const CubicRoots c = em_cubic_roots(0.1, 0.0);
    CHECK(std::abs(c.lambda1) < 1e-15);
    CHECK(std::abs(c.lambda2 - complex(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(c.lambda3 - complex(0.0, -1.0)) < 1e-15);
  }

  SUBCASE("a=0.1, r=1: one real root in the (-ar, -ar^2/(r+1)) bracket") {
    const CubicRoots c = em_cubic_roots(0.1, 1.0);
    CHECK(c.kind == RootKind::one_real);
    CHECK(c.lambda1.imag() == 0.0);
    CHECK(c.lambda1.real() == doctest::Approx(-0.050062578124632720).epsilon(1e-13));
    CHECK(c.lambda2.real() == doctest::Approx(-0.024968710937683640).epsilon(1e-12));
    CHECK(c.lambda2.imag() == doctest::Approx(1.4131088306956871).epsilon(1e-13));
    CHECK(std::abs(c.lambda3 - std::conj(c.lambda2)) < 1e-14);
    CHECK(c.lambda1.real() > -0.1);
    CHECK(c.lambda1.real() < -0.05);
  }

  SUBCASE("a=0.1, r=1e6: real root matches the far series to 1e-9") {
    const CubicRoots c = em_cubic_roots(0.1, 1.0e6);
    const double a = 0.1, r = 1.0e6;
    const double series = -a * r + (1.0 / (a * r)) * (1.0 - 1.0 / (a * a * r));
    CHECK(std::abs(c.lambda1.real() - series) <= 1e-9 * std::abs(series));
  }
}

TEST_CASE("transverse cubic roots: invariants over a parameter sweep") {
  for (const double a : {0.05, 0.1, 0.3}) {
    double prev_sigma = 0.0;
    bool have_prev = false;
    for (int i = 0; i < 200; ++i) {
      const double r = 1e-4 * std::pow(1e8, i / 199.0);
      const CubicRoots c = em_cubic_roots(a, r);

      // Vieta to 1e-11 relative.
      const complex sum = c.lambda1 + c.lambda2 + c.lambda3;
      const complex pair =
          c.lambda1 * c.lambda2 + c.lambda2 * c.lambda3 + c.lambda3 * c.lambda1;
      const complex prod = c.lambda1 * c.lambda2 * c.lambda3;
      CHECK(std::abs(sum + a * r) <= 1e-11 * std::max(1.0, a * r));
      CHECK(std::abs(pair - (r + 1.0)) <= 1e-11 * (r + 1.0));
      CHECK(std::abs(prod + a * r * r) <= 1e-11 * std::max(1.0, a * r * r));

      // Residuals of the cubic itself.
      CHECK(cubic_residual(a, r, c.lambda1) <= 1e-10);
      CHECK(cubic_residual(a, r, c.lambda2) <= 1e-10);
      CHECK(cubic_residual(a, r, c.lambda3) <= 1e-10);

      // a <= sqrt(2)/4 guarantees exactly one real root inside the bracket.
      CHECK(c.kind == RootKind::one_real);
      const double sigma = c.lambda1.real();
      CHECK(c.lambda1.imag() == 0.0);
      CHECK(sigma > -a * r);
      CHECK(sigma < -a * r * r / (r + 1.0));

      // Strict monotone decrease of sigma in r.
      if (have_prev) CHECK(sigma < prev_sigma);
      prev_sigma = sigma;
      have_prev = true;

      // All real parts nonpositive (strictly negative for r > 0).
      CHECK(c.lambda1.real() < 0.0);
      CHECK(c.lambda2.real() < 0.0);
      CHECK(c.lambda3.real() < 0.0);

      // Claim: phi = 3 sigma^2 + 2 a r sigma - a^2 r^2 + 4(r+1) > 0, with the
      // explicit bracket for large r.
      const double phi = 3 * sigma * sigma + 2 * a * r * sigma - a * a * r * r + 4 * (r + 1);
      CHECK(phi > 0.0);
      if (r > std::sqrt(6.0) / (2.0 * a)) {
        CHECK(phi >= 3.0 / (a * a * r * r) + 4.0 * r - 1e-9 * phi);
        CHECK(phi <= 4.0 * (1.0 + r) + 1e-9 * phi);
      }
    }
  }
}

TEST_CASE("property-2 bracket for moderate coupling") {
  // For a < 3 sqrt(3)/2 and r > 1/a the real root lies in (-ar, -ar + 1/(ar)).
  for (const double a : {0.5, 1.0, 2.0}) {
    for (double r = 1.2 / a; r <= 1e5; r *= 7.0) {
      const CubicRoots c = em_cubic_roots(a, r);
      const double sigma = c.lambda1.real();
      CHECK(sigma > -a * r);
      // The strict upper margin shrinks like 1/(a^3 r^2) and drops below one
      // ulp of sigma near r ~ 1e5, so grant the comparison that much slack.
      CHECK(sigma < -a * r + 1.0 / (a * r) + 1e-10 * std::abs(sigma));
    }
  }
}

TEST_CASE("series asymptotics: values, windows, and error orders") {
  SUBCASE("origin window value") {
    const CubicRoots s = root_asymptotics(0.1, 0.01);
    CHECK(s.lambda1.real() == doctest::Approx(-9.9e-6).epsilon(1e-12));
    CHECK(s.lambda2.imag() == doctest::Approx(std::sqrt(1.01)).epsilon(1e-12));
  }

  SUBCASE("window enforcement") {
    CHECK_THROWS_AS(root_asymptotics(0.1, 1.0), std::domain_error);
    CHECK_NOTHROW(root_asymptotics(0.1, 0.1));
    CHECK_NOTHROW(root_asymptotics(0.1, 100.0));
  }

  SUBCASE("origin error shrinks like r^4") {
    // log-log slope of |sigma_exact - sigma_series| vs r on [1e-3, 1e-2]
    const double a = 0.1;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int i = 0; i <= 10; ++i) {
      const double r = 1e-3 * std::pow(10.0, i / 10.0);
      const double exact = em_cubic_roots(a, r).lambda1.real();
      const double series = root_asymptotics(a, r).lambda1.real();
      const double err = std::abs(exact - series);
      REQUIRE(err > 0.0);
      const double x = std::log(r), y = std::log(err);
      sx += x; sy += y; sxx += x * x; sxy += x * y; ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(4.0).epsilon(0.075));  // 4.0 +- 0.3
  }

  SUBCASE("infinity: Re chi matches -1/(2ar) to 1%") {
    const CubicRoots c = em_cubic_roots(0.1, 1e4);
    CHECK(c.lambda2.real() == doctest::Approx(-5e-4).epsilon(0.01));
  }
}

TEST_CASE("discriminant zero set") {
  SUBCASE("empty for small coupling") {
    CHECK(discriminant_zero_set(0.1, 0.01, 100.0).empty());
  }

  SUBCASE("still empty at a = 2 (positive dip but no crossing)") {
    CHECK(discriminant_zero_set(2.0, 0.01, 100.0).empty());
  }

  SUBCASE("two zeros at a = 20, located to high accuracy") {
    const std::vector<double> zs = discriminant_zero_set(20.0, 0.01, 100.0);
    REQUIRE(zs.size() == 2);
    CHECK(zs[0] == doctest::Approx(0.094459581018264729).epsilon(1e-9));
    CHECK(zs[1] == doctest::Approx(0.097642399587036840).epsilon(1e-9));
    CHECK(zs[0] < zs[1]);

    // Between the zeros the cubic genuinely has three real roots...
    const CubicRoots mid = em_cubic_roots(20.0, 0.096);
    CHECK(mid.kind == RootKind::three_real);
    CHECK(mid.lambda1.real() >= mid.lambda2.real());
    CHECK(mid.lambda2.real() >= mid.lambda3.real());
    CHECK(mid.lambda1.imag() == 0.0);
    CHECK(mid.lambda2.imag() == 0.0);
    CHECK(mid.lambda3.imag() == 0.0);

    // ...and exactly at a zero the solver reports (near-)degeneracy.
    const CubicRoots dz = em_cubic_roots(20.0, zs[0]);
    CHECK(dz.kind == RootKind::degenerate);
  }
}
