#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "nsm/ode.hpp"

using namespace nsm;

namespace {

const OdeRhs kDecay = [](double, std::span<const complex> y, std::span<complex> dy) {
  dy[0] = -y[0];
};

const OdeRhs kRotate = [](double, std::span<const complex> y, std::span<complex> dy) {
  dy[0] = complex(0.0, 1.0) * y[0];
};

}  // namespace

TEST_CASE("scalar exponential decay to tight tolerance") {
  std::vector<complex> y{complex(1.0)};
  OdeOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  const OdeStats st = integrate_ode(kDecay, y, 0.0, 1.0, opt);
  CHECK(std::abs(y[0] - std::exp(-1.0)) < 1e-12);
  CHECK(st.n_accepted > 0);
  CHECK(st.n_rhs >= 12 * st.n_accepted);
  CHECK(st.min_step > 0.0);
}

TEST_CASE("long oscillation keeps phase and modulus") {
  std::vector<complex> y{complex(1.0)};
  OdeOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  const double T = 100.0;
  integrate_ode(kRotate, y, 0.0, T, opt);
  const complex expect = std::exp(complex(0.0, T));
  CHECK(std::abs(y[0] - expect) < 1e-9);
  CHECK(std::abs(std::abs(y[0]) - 1.0) < 1e-10);
}

TEST_CASE("backward integration inverts forward integration") {
  std::vector<complex> y{complex(0.3, 0.4)};
  OdeOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-15;
  integrate_ode(kDecay, y, 0.0, 2.0, opt);
  integrate_ode(kDecay, y, 2.0, 0.0, opt);
  CHECK(std::abs(y[0] - complex(0.3, 0.4)) < 1e-11);
}

TEST_CASE("time-dependent right-hand side") {
  // y' = 2 t y  ->  y(t) = exp(t^2)
  const OdeRhs rhs = [](double t, std::span<const complex> y, std::span<complex> dy) {
    dy[0] = 2.0 * t * y[0];
  };
  std::vector<complex> y{complex(1.0)};
  OdeOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  integrate_ode(rhs, y, 0.0, 1.5, opt);
  CHECK(std::abs(y[0] - std::exp(2.25)) < 1e-10 * std::exp(2.25));
}

TEST_CASE("tolerance scaling behaves like a high-order method") {
  // Error against the exact solution should fall by orders of magnitude as
  // rtol tightens by 1e4; an order >= 5 method does this easily.
  auto run = [](double rtol) {
    std::vector<complex> y{complex(1.0)};
    OdeOptions opt;
    opt.rtol = rtol;
    opt.atol = rtol * 1e-3;
    integrate_ode(kRotate, y, 0.0, 20.0, opt);
    return std::abs(y[0] - std::exp(complex(0.0, 20.0)));
  };
  const double coarse = run(1e-6);
  const double fine = run(1e-10);
  CHECK(fine < coarse);
  CHECK(fine < 1e-8);
}

TEST_CASE("degenerate inputs and failure paths") {
  std::vector<complex> y{complex(1.0)};

  SUBCASE("zero-length interval is a no-op") {
    const OdeStats st = integrate_ode(kDecay, y, 3.0, 3.0);
    CHECK(y[0] == complex(1.0));
    CHECK(st.n_rhs == 0);
  }

  SUBCASE("nonpositive tolerances rejected") {
    OdeOptions opt;
    opt.rtol = 0.0;
    CHECK_THROWS_AS(integrate_ode(kDecay, y, 0.0, 1.0, opt), std::invalid_argument);
  }

  SUBCASE("step budget exhaustion reports diagnostics") {
    OdeOptions opt;
    opt.max_steps = 3;
    opt.max_step = 1e-6;  // force many tiny steps
    CHECK_THROWS_AS(integrate_ode(kDecay, y, 0.0, 1.0, opt), IntegrationError);
  }
}

TEST_CASE("stiff-ish linear system integrates correctly") {
  // Two widely separated decay rates in one system; explicit RK handles it
  // with step adaptation (this mirrors the viscous branch at high k).
  const OdeRhs rhs = [](double, std::span<const complex> y, std::span<complex> dy) {
    dy[0] = -1000.0 * y[0];
    dy[1] = -0.1 * y[1];
  };
  std::vector<complex> y{complex(1.0), complex(1.0)};
  OdeOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-13;
  integrate_ode(rhs, y, 0.0, 1.0, opt);
  CHECK(std::abs(y[1] - std::exp(-0.1)) < 1e-10);
  CHECK(std::abs(y[0]) < 1e-12);
}
