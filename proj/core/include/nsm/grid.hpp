#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <vector>

#include "nsm/types.hpp"

namespace nsm {

/**
 * Discretization of the periodic box [0, L)^3 for the band-limited solver.
 *
 * Wavevectors are 2*pi/L times signed integer triples; the default box
 * L = 2*pi makes them integer-valued. The band kept by the dealias rule is
 * the cube max(|jx|,|jy|,|jz|) <= dealias_cutoff(); the Nyquist plane is
 * always dropped so that every retained mode has a conjugate partner and
 * spectral derivatives stay skew-symmetric.
 */
struct GridConfig {
    int n_per_axis = 32;             // >= 16, power of two
    double box_length = 2.0 * std::numbers::pi;
    double dealias_fraction = 2.0 / 3.0;  // in (0.5, 1]
    double dt = 0.05;                // <= 0.5; the advective cap is checked at run time
    double t_end = 1.0;
    double pressure_index = 5.0 / 3.0;  // adiabatic exponent, > 1
    double amplitude = 1e-3;         // overall scale of profile-seeded initial data

    void validate() const;

    /// Retained-band half-width: min(floor(fraction * n/2), n/2 - 1).
    int dealias_cutoff() const;

    /// Wavevector quantum 2*pi / box_length.
    double k_unit() const { return 2.0 * std::numbers::pi / box_length; }
};

/**
 * Real periodic fields of the normalized state (density perturbation rho,
 * velocity v, electric field Et, magnetic field Bt) sampled on the n^3 grid,
 * index (ix*n + iy)*n + iz (z fastest). A state produced by the stepper
 * keeps its spatial mean of rho constant and satisfies the two divergence
 * constraints spectrally after projection.
 */
struct GridState {
    int n_per_axis = 0;
    double box_length = 0.0;
    double time = 0.0;
    std::vector<double> rho;
    std::array<std::vector<double>, 3> v{}, Et{}, Bt{};

    std::size_t n_cells() const {
        return static_cast<std::size_t>(n_per_axis) * n_per_axis * n_per_axis;
    }

    /// Throws std::invalid_argument unless dimensions match the config.
    void require_dims(const GridConfig& config) const;
};

/// All-zero fields at time 0 with the config's dimensions.
GridState zero_state(const GridConfig& config);

/**
 * Real-to-complex FFT pair plus the index bookkeeping shared by everything
 * spectral: transforms are executed into workspace-owned buffers (plans are
 * created deterministically, independent of runtime timing, so identical
 * inputs give identical outputs run to run), the forward transform carries
 * the 1/n^3 factor that turns outputs into Fourier-series coefficients, and
 * the inverse is the plain synthesis sum. Half-spectrum layout:
 * (ix*n + iy)*(n/2+1) + iz with iz in [0, n/2].
 *
 * One workspace serves one simulation at a time (the buffers are shared
 * scratch); distinct workspaces may run concurrently.
 */
class SpectralWorkspace {
public:
    SpectralWorkspace(int n_per_axis, double box_length);
    ~SpectralWorkspace();
    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    int n() const { return n_; }
    double box_length() const { return box_length_; }
    std::size_t n_real() const { return static_cast<std::size_t>(n_) * n_ * n_; }
    std::size_t n_spec() const {
        return static_cast<std::size_t>(n_) * n_ * (n_ / 2 + 1);
    }

    std::size_t spec_index(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(ix) * n_ + iy) * (n_ / 2 + 1) + iz;
    }

    /// Signed frequency of a storage index: i for i <= n/2, i - n above.
    int signed_index(int i) const { return i <= n_ / 2 ? i : i - n_; }

    Vec3 wavevector(int ix, int iy, int iz) const;

    /// spec[k] = (1/n^3) sum_x field[x] exp(-i k.x); spec must have n_spec() slots.
    void forward(const std::vector<double>& field, std::vector<complex>& spec);

    /// field[x] = sum_k spec[k] exp(i k.x) over the Hermitian extension.
    void inverse(const std::vector<complex>& spec, std::vector<double>& field);

    /// True iff max(|jx|,|jy|,|jz|) <= cutoff for the signed frequencies.
    bool retained(int ix, int iy, int iz, int cutoff) const;

    /// Zero every coefficient outside the retained cube.
    void dealias(std::vector<complex>& spec, int cutoff) const;

    /// Multiplicity of a stored coefficient in full-spectrum sums
    /// (1 on the iz = 0 and Nyquist planes, else 2).
    double hermitian_weight(int iz) const { return (iz == 0 || iz == n_ / 2) ? 1.0 : 2.0; }

private:
    int n_;
    double box_length_;
    std::vector<double> real_buf_;
    std::vector<complex> spec_buf_;
    void* plan_fwd_ = nullptr;  // fftw_plan kept opaque here
    void* plan_bwd_ = nullptr;
};

/**
 * Mean-volume L2 norm squared, (1/V) int |f|^2 dx = sum_k |spec_k|^2, via the
 * Hermitian-weighted half-spectrum sum.
 */
double spectral_norm2(const SpectralWorkspace& ws, const std::vector<complex>& spec);

}  // namespace nsm
