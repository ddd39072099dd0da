#include "nsm/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nsm {

std::vector<QuadNode> gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    if (!(a < b)) throw std::invalid_argument("gauss_legendre: need a < b");

    std::vector<QuadNode> nodes(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    // Newton iteration on P_n from the Chebyshev-like initial guess; only the
    // lower half is computed, the rest follows by symmetry.
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 64; ++iter) {
            // Three-term recurrence for P_n(x) and P_{n-1}(x).
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = {mid - half * x, half * w};
        nodes[n - 1 - i] = {mid + half * x, half * w};
    }
    return nodes;
}

std::vector<QuadNode> radial_rule(int points_per_panel, double k_max) {
    if (points_per_panel < 2)
        throw std::invalid_argument("radial_rule: need at least 2 points per panel");
    if (!(k_max > 0.0)) throw std::invalid_argument("radial_rule: k_max must be > 0");

    // Dense breakpoints below |k| ~ 1 (late-time integrands oscillate in k
    // with phase ~ |k|^2 t and concentrate there), relaxing to ratio 1.5.
    std::vector<double> edges{0.0};
    for (const double e : {0.25, 0.5, 0.75, 1.0, 1.5})
        if (e < k_max) edges.push_back(e);
    for (double e = 2.0; e < k_max; e *= 1.5) edges.push_back(e);
    edges.push_back(k_max);

    std::vector<QuadNode> nodes;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!(edges[i] < edges[i + 1])) continue;
        auto panel = gauss_legendre(points_per_panel, edges[i], edges[i + 1]);
        nodes.insert(nodes.end(), panel.begin(), panel.end());
    }
    return nodes;
}

std::vector<SphereNode> sphere_rule_26() {
    std::vector<SphereNode> nodes;
    nodes.reserve(26);
    const double wa = 1.0 / 21.0;
    const double we = 4.0 / 105.0;
    const double wc = 9.0 / 280.0;

    for (int axis = 0; axis < 3; ++axis)
        for (int sign : {-1, 1}) {
            Vec3 d{0.0, 0.0, 0.0};
            d[axis] = static_cast<double>(sign);
            nodes.push_back({d, wa});
        }

    const double s = std::numbers::sqrt2 / 2.0;
    for (int axis = 0; axis < 3; ++axis)  // axis = the zero component
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1}) {
                Vec3 d{0.0, 0.0, 0.0};
                d[(axis + 1) % 3] = s1 * s;
                d[(axis + 2) % 3] = s2 * s;
                nodes.push_back({d, we});
            }

    const double c = 1.0 / std::sqrt(3.0);
    for (int s1 : {-1, 1})
        for (int s2 : {-1, 1})
            for (int s3 : {-1, 1}) nodes.push_back({{s1 * c, s2 * c, s3 * c}, wc});

    return nodes;
}

std::vector<SphereNode> sphere_product_rule(int n_polar) {
    if (n_polar < 1)
        throw std::invalid_argument("sphere_product_rule: n_polar must be >= 1");
    const int n_az = 2 * n_polar;
    const auto polar = gauss_legendre(n_polar, -1.0, 1.0);

    std::vector<SphereNode> nodes;
    nodes.reserve(static_cast<std::size_t>(n_polar) * n_az);
    for (const auto& [z, wz] : polar) {
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (int j = 0; j < n_az; ++j) {
            const double phi = 2.0 * std::numbers::pi * (j + 0.5) / n_az;
            // wz integrates dz over [-1,1] (total 2); normalize the mean to 1.
            nodes.push_back({{rho * std::cos(phi), rho * std::sin(phi), z},
                             wz / (2.0 * n_az)});
        }
    }
    return nodes;
}

}  // namespace nsm
