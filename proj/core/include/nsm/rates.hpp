#pragma once

#include <span>
#include <utility>
#include <vector>

namespace nsm {

/**
 * Derivative-count index m(ell, s, q) entering the L^s -> L^q decay estimates:
 *   m = 0                              if ell + 3(1/s - 1/q) < 0,
 *   m = ell                            if ell + 3(1/s - 1/q) >= 0, s = q = 2,
 *                                      and ell is an integer,
 *   m = floor(ell + 3(1/s - 1/q)) + 1  otherwise.
 * Requires ell >= 0, s in [1,2], q in [2,inf].
 */
double rate_m_index(double ell, double s, double q);

/// Low-frequency rate exponent delta(j, p, q) = j/2 + (3/2)(1/p - 1/q).
double rate_delta(int j, double p, double q);

/// Both indices together; the pair (m, delta) drives the decay bookkeeping.
std::pair<double, double> rate_indices(double ell, double s, double q, int j,
                                       double p);

/**
 * Result of a power-law fit  value ~ exp(log_prefactor) * (1+t)^exponent
 * obtained by least squares on (log(1+t), log value) inside [window_min, window_max].
 */
struct DecayFit {
    double exponent = 0.0;
    double log_prefactor = 0.0;
    double residual_rms = 0.0;
    double window_min = 0.0;
    double window_max = 0.0;
    int n_points = 0;
};

/**
 * Least-squares decay fit over the samples with t inside the window.
 * Requires at least 8 in-window points, all with value > 0.
 */
DecayFit fit_decay_exponent(std::span<const std::pair<double, double>> series,
                            double window_min, double window_max);

}  // namespace nsm
