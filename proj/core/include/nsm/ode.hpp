#pragma once
// Adaptive explicit Runge-Kutta integration on complex state vectors.
//
// The method is the 12-stage Dormand-Prince 8(5,3) pair: an 8th-order
// solution with embedded 5th- and 3rd-order error estimates combined into a
// single error norm.  It is deliberately structure-blind -- it sees only a
// right-hand side callback -- so it can serve as an independent reference
// when checking closed-form propagators.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

#include "nsm/types.hpp"

namespace nsm {

/// Right-hand side callback: writes dy/dt for the given (t, y) into dydt.
/// The spans have equal length and do not alias.
using OdeRhs =
    std::function<void(double t, std::span<const complex> y, std::span<complex> dydt)>;

/// Tolerances and limits for integrate_ode().
struct OdeOptions {
  double rtol = 1.0e-12;      ///< relative tolerance per component
  double atol = 1.0e-14;      ///< absolute tolerance per component
  double initial_step = 0.0;  ///< first trial step; 0 selects one automatically
  double max_step = 0.0;      ///< step-size ceiling; 0 means unlimited
  std::size_t max_steps = 50'000'000;  ///< attempted steps before giving up
};

/// Work counters reported by a completed integration.
struct OdeStats {
  std::size_t n_accepted = 0;
  std::size_t n_rejected = 0;
  std::size_t n_rhs = 0;   ///< right-hand side evaluations
  double min_step = 0.0;   ///< smallest accepted step magnitude
  double last_step = 0.0;  ///< step size in effect at the end
};

/// Thrown when the step size underflows or the step budget is exhausted.
class IntegrationError : public std::runtime_error {
 public:
  explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

/// Integrates dy/dt = f(t, y) from t0 to t1, advancing y in place.
/// Integration may run in either time direction.  Throws IntegrationError
/// if the controller cannot reach t1 within the configured limits, and
/// std::invalid_argument for non-positive tolerances.
OdeStats integrate_ode(const OdeRhs& f, std::span<complex> y, double t0, double t1,
                       const OdeOptions& opt = {});

}  // namespace nsm
