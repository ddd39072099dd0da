#pragma once

#include <stdexcept>

namespace nsm {

/**
 * Normalized coefficients of the linearized system.
 *
 * gamma = sqrt(P'(n_b)) is the sound speed, beta = sqrt(n_b) the plasma
 * coupling, mu = nu / n_b the effective viscosity. The combination
 * a = mu * beta controls the character of the transverse dispersion cubic:
 *  - a <= sqrt(2)/4 guarantees a unique real root for every wavenumber;
 *  - a <= 1/sqrt(5) guarantees the root discriminant stays positive.
 */
struct PhysParams {
    double gamma = 1.0;
    double beta = 1.0;
    double mu = 0.1;

    double a() const { return mu * beta; }
    bool unique_real_root_guaranteed() const;
    bool discriminant_positive_all_r() const;

    void validate() const {
        if (!(gamma > 0.0) || !(beta > 0.0) || !(mu > 0.0))
            throw std::domain_error("PhysParams: gamma, beta, mu must all be positive");
    }
};

/// Reference parameter point used by defaults and tests: gamma=1, beta=1, mu=0.1.
inline PhysParams reference_params() { return PhysParams{1.0, 1.0, 0.1}; }

/**
 * Map raw fluid data (background density n_b, pressure slope P'(n_b),
 * viscosity nu) to the normalized coefficient set.
 * Throws std::domain_error unless all three inputs are positive.
 */
PhysParams rescale_to_normalized(double n_b, double dP_dn, double nu);

enum class RegimeLabel { low_k, mid_k, high_k };

/**
 * Wavenumber regime split used by the pointwise bound tables; both outer
 * regimes are closed: |k| <= eps is low_k, |k| >= L is high_k.
 * Requires 0 < eps < L.
 */
RegimeLabel classify_regime(double k_norm, double eps, double L);

const char* regime_name(RegimeLabel r);

}  // namespace nsm
