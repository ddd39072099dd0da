#include "nsm/params.hpp"

#include <cmath>

namespace nsm {

bool PhysParams::unique_real_root_guaranteed() const { return a() <= std::sqrt(2.0) / 4.0; }

bool PhysParams::discriminant_positive_all_r() const { return a() <= 1.0 / std::sqrt(5.0); }

PhysParams rescale_to_normalized(double n_b, double dP_dn, double nu) {
    if (!(n_b > 0.0)) throw std::domain_error("rescale_to_normalized: n_b must be positive");
    if (!(dP_dn > 0.0)) throw std::domain_error("rescale_to_normalized: P'(n_b) must be positive");
    if (!(nu > 0.0)) throw std::domain_error("rescale_to_normalized: nu must be positive");
    PhysParams p;
    p.gamma = std::sqrt(dP_dn);
    p.beta = std::sqrt(n_b);
    p.mu = nu / n_b;
    return p;
}

RegimeLabel classify_regime(double k_norm, double eps, double L) {
    if (!(eps > 0.0) || !(L > eps))
        throw std::domain_error("classify_regime: need 0 < eps < L");
    if (!(k_norm >= 0.0)) throw std::domain_error("classify_regime: |k| must be nonnegative");
    if (k_norm <= eps) return RegimeLabel::low_k;
    if (k_norm >= L) return RegimeLabel::high_k;
    return RegimeLabel::mid_k;
}

const char* regime_name(RegimeLabel r) {
    switch (r) {
        case RegimeLabel::low_k: return "low_k";
        case RegimeLabel::mid_k: return "mid_k";
        default: return "high_k";
    }
}

}  // namespace nsm
