#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "nsm/grid.hpp"

using namespace nsm;

namespace {

std::vector<double> random_field(std::size_t m, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> f(m);
    for (double& x : f) x = dist(rng);
    return f;
}

}  // namespace

TEST_CASE("grid config validation and derived quantities") {
    GridConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.dealias_cutoff() == 10);  // floor(2/3 * 16)
    CHECK(cfg.k_unit() == doctest::Approx(1.0).epsilon(1e-15));

    GridConfig c16 = cfg;
    c16.n_per_axis = 16;
    CHECK(c16.dealias_cutoff() == 5);

    GridConfig full = cfg;
    full.dealias_fraction = 1.0;
    CHECK(full.dealias_cutoff() == 15);  // Nyquist always excluded

    GridConfig bad = cfg;
    bad.n_per_axis = 24;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = cfg;
    bad.n_per_axis = 8;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = cfg;
    bad.dealias_fraction = 0.5;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = cfg;
    bad.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = cfg;
    bad.dt = 0.75;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = cfg;
    bad.t_end = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = cfg;
    bad.pressure_index = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = cfg;
    bad.amplitude = -1e-3;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = cfg;
    bad.box_length = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("zero state has the right shape and require_dims guards it") {
    GridConfig cfg;
    cfg.n_per_axis = 16;
    GridState s = zero_state(cfg);
    CHECK(s.n_cells() == 4096);
    CHECK(s.rho.size() == 4096);
    CHECK(s.v[2].size() == 4096);
    CHECK(s.time == 0.0);
    CHECK_NOTHROW(s.require_dims(cfg));

    GridState broken = s;
    broken.Et[1].resize(10);
    CHECK_THROWS_AS(broken.require_dims(cfg), std::invalid_argument);
    GridConfig other = cfg;
    other.n_per_axis = 32;
    CHECK_THROWS_AS(s.require_dims(other), std::invalid_argument);
}

TEST_CASE("forward transform recovers known Fourier coefficients") {
    const int n = 16;
    const double L = 2.0 * std::numbers::pi;
    SpectralWorkspace ws(n, L);

    // f = 3 + 2 cos(k.x) + 4 sin(m.x) with k = (1,2,3), m = (2,0,1):
    // coefficients 3 at 0, 1 at +-k, -2i at +m, +2i at -m.
    std::vector<double> f(ws.n_real());
    const double h = L / n;
    std::size_t idx = 0;
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            for (int iz = 0; iz < n; ++iz, ++idx) {
                const double x = h * ix, y = h * iy, z = h * iz;
                f[idx] = 3.0 + 2.0 * std::cos(x + 2 * y + 3 * z) + 4.0 * std::sin(2 * x + z);
            }

    std::vector<complex> spec;
    ws.forward(f, spec);
    CHECK(std::abs(spec[ws.spec_index(0, 0, 0)] - 3.0) < 1e-13);
    CHECK(std::abs(spec[ws.spec_index(1, 2, 3)] - 1.0) < 1e-13);
    CHECK(std::abs(spec[ws.spec_index(2, 0, 1)] - complex(0.0, -2.0)) < 1e-13);
    // everything else vanishes, e.g. the conjugate-partner slot of (1,2,3)
    CHECK(std::abs(spec[ws.spec_index(15, 14, 3)]) < 1e-13);
    CHECK(std::abs(spec[ws.spec_index(4, 4, 4)]) < 1e-13);
}

TEST_CASE("round trip and Parseval on a random field") {
    const int n = 16;
    SpectralWorkspace ws(n, 3.5);
    std::vector<double> f = random_field(ws.n_real(), 20250816);

    std::vector<complex> spec;
    ws.forward(f, spec);
    std::vector<double> back;
    ws.inverse(spec, back);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        max_diff = std::max(max_diff, std::abs(f[i] - back[i]));
    CHECK(max_diff < 1e-12);

    double mean_sq = 0.0;
    for (double x : f) mean_sq += x * x;
    mean_sq /= static_cast<double>(f.size());
    CHECK(spectral_norm2(ws, spec) == doctest::Approx(mean_sq).epsilon(1e-12));
}

TEST_CASE("signed indices and wavevectors") {
    SpectralWorkspace ws(16, 2.0 * std::numbers::pi);
    CHECK(ws.signed_index(0) == 0);
    CHECK(ws.signed_index(8) == 8);   // Nyquist stored as +n/2
    CHECK(ws.signed_index(9) == -7);
    CHECK(ws.signed_index(15) == -1);

    const Vec3 k = ws.wavevector(0, 15, 8);
    CHECK(k[0] == 0.0);
    CHECK(k[1] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(k[2] == doctest::Approx(8.0).epsilon(1e-15));

    SpectralWorkspace ws2(16, 4.0 * std::numbers::pi);  // doubled box halves the quantum
    const Vec3 q = ws2.wavevector(2, 0, 0);
    CHECK(q[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("dealias keeps exactly the retained cube") {
    const int n = 16, cutoff = 3;
    SpectralWorkspace ws(n, 1.0);
    std::vector<complex> spec(ws.n_spec(), complex(1.0, -0.5));
    ws.dealias(spec, cutoff);

    std::size_t nonzero = 0;
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            for (int iz = 0; iz <= n / 2; ++iz) {
                const complex v = spec[ws.spec_index(ix, iy, iz)];
                const bool keep = ws.retained(ix, iy, iz, cutoff);
                if (keep) {
                    CHECK(v == complex(1.0, -0.5));
                    ++nonzero;
                } else {
                    CHECK(v == complex{});
                }
            }
    // |jx|,|jy| <= 3 gives 7 choices each; stored iz runs over 0..3
    CHECK(nonzero == 7u * 7u * 4u);

    CHECK(ws.retained(13, 0, 0, 3));       // j = -3
    CHECK_FALSE(ws.retained(4, 0, 0, 3));  // j = +4
    CHECK_FALSE(ws.retained(0, 12, 0, 3)); // j = -4
}

TEST_CASE("workspace constructor and size guards") {
    CHECK_THROWS_AS(SpectralWorkspace(12, 1.0), std::domain_error);
    CHECK_THROWS_AS(SpectralWorkspace(16, 0.0), std::domain_error);

    SpectralWorkspace ws(16, 1.0);
    std::vector<double> small(10);
    std::vector<complex> spec;
    CHECK_THROWS_AS(ws.forward(small, spec), std::invalid_argument);
    std::vector<complex> tiny(5);
    std::vector<double> f;
    CHECK_THROWS_AS(ws.inverse(tiny, f), std::invalid_argument);
    CHECK_THROWS_AS(ws.dealias(tiny, 3), std::invalid_argument);
}
