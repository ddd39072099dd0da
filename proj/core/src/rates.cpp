#include "nsm/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace nsm {

namespace {

bool is_integer(double x) { return x == std::floor(x); }

}  // namespace

double rate_m_index(double ell, double s, double q) {
    if (ell < 0.0) throw std::invalid_argument("rate_m_index: ell must be >= 0");
    if (s < 1.0 || s > 2.0) throw std::invalid_argument("rate_m_index: s must lie in [1,2]");
    if (q < 2.0) throw std::invalid_argument("rate_m_index: q must lie in [2,inf]");

    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    const double shifted = ell + 3.0 * (1.0 / s - inv_q);
    if (shifted < 0.0) return 0.0;
    if (s == 2.0 && q == 2.0 && is_integer(ell)) return ell;
    return std::floor(shifted) + 1.0;
}

double rate_delta(int j, double p, double q) {
    if (j < 0) throw std::invalid_argument("rate_delta: j must be >= 0");
    if (p < 1.0 || p > 2.0) throw std::invalid_argument("rate_delta: p must lie in [1,2]");
    if (q < 2.0) throw std::invalid_argument("rate_delta: q must lie in [2,inf]");
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    return 0.5 * j + 1.5 * (1.0 / p - inv_q);
}

std::pair<double, double> rate_indices(double ell, double s, double q, int j,
                                       double p) {
    return {rate_m_index(ell, s, q), rate_delta(j, p, q)};
}

DecayFit fit_decay_exponent(std::span<const std::pair<double, double>> series,
                            double window_min, double window_max) {
    if (!(window_min < window_max))
        throw std::invalid_argument("fit_decay_exponent: empty window");

    // Accumulate the normal equations for log(value) = b + a*log(1+t).
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::vector<std::pair<double, double>> pts;
    for (const auto& [t, v] : series) {
        if (t < window_min || t > window_max) continue;
        if (!(v > 0.0))
            throw std::domain_error(
                "fit_decay_exponent: non-positive value inside fit window");
        const double x = std::log1p(t);
        const double y = std::log(v);
        pts.emplace_back(x, y);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const int n = static_cast<int>(pts.size());
    if (n < 8)
        throw std::invalid_argument(
            "fit_decay_exponent: fewer than 8 samples inside window");

    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0)
        throw std::domain_error("fit_decay_exponent: degenerate abscissae");

    DecayFit fit;
    fit.exponent = (n * sxy - sx * sy) / denom;
    fit.log_prefactor = (sy - fit.exponent * sx) / n;
    fit.window_min = window_min;
    fit.window_max = window_max;
    fit.n_points = n;

    double ss = 0.0;
    for (const auto& [x, y] : pts) {
        const double resid = y - (fit.log_prefactor + fit.exponent * x);
        ss += resid * resid;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

}  // namespace nsm
