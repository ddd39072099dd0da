#include "nsm/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace nsm {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

void GridConfig::validate() const {
    if (n_per_axis < 16 || !power_of_two(n_per_axis))
        throw std::domain_error("GridConfig: n_per_axis must be a power of two >= 16");
    if (!(box_length > 0.0) || !std::isfinite(box_length))
        throw std::domain_error("GridConfig: box_length must be positive");
    if (!(dealias_fraction > 0.5) || !(dealias_fraction <= 1.0))
        throw std::domain_error("GridConfig: dealias_fraction must lie in (0.5, 1]");
    if (!(dt > 0.0) || !(dt <= 0.5))
        throw std::domain_error("GridConfig: dt must lie in (0, 0.5]");
    if (!(t_end > 0.0))
        throw std::domain_error("GridConfig: t_end must be positive");
    if (!(pressure_index > 1.0))
        throw std::domain_error("GridConfig: pressure_index must exceed 1");
    if (!(amplitude >= 0.0))
        throw std::domain_error("GridConfig: amplitude must be nonnegative");
}

int GridConfig::dealias_cutoff() const {
    const int half = n_per_axis / 2;
    const int band = static_cast<int>(std::floor(dealias_fraction * half));
    return band < half ? band : half - 1;
}

void GridState::require_dims(const GridConfig& config) const {
    const std::size_t m = static_cast<std::size_t>(config.n_per_axis) *
                          config.n_per_axis * config.n_per_axis;
    bool ok = n_per_axis == config.n_per_axis && rho.size() == m;
    for (int c = 0; c < 3 && ok; ++c)
        ok = v[c].size() == m && Et[c].size() == m && Bt[c].size() == m;
    if (!ok)
        throw std::invalid_argument("GridState: field dimensions do not match the grid config");
}

GridState zero_state(const GridConfig& config) {
    config.validate();
    GridState s;
    s.n_per_axis = config.n_per_axis;
    s.box_length = config.box_length;
    s.time = 0.0;
    const std::size_t m = s.n_cells();
    s.rho.assign(m, 0.0);
    for (int c = 0; c < 3; ++c) {
        s.v[c].assign(m, 0.0);
        s.Et[c].assign(m, 0.0);
        s.Bt[c].assign(m, 0.0);
    }
    return s;
}

SpectralWorkspace::SpectralWorkspace(int n_per_axis, double box_length)
    : n_(n_per_axis), box_length_(box_length) {
    if (!power_of_two(n_per_axis) || n_per_axis < 4)
        throw std::domain_error("SpectralWorkspace: n_per_axis must be a power of two >= 4");
    if (!(box_length > 0.0))
        throw std::domain_error("SpectralWorkspace: box_length must be positive");

    real_buf_.resize(n_real());
    spec_buf_.resize(n_spec());

    std::lock_guard<std::mutex> lock(plan_mutex());
    plan_fwd_ = fftw_plan_dft_r2c_3d(n_, n_, n_, real_buf_.data(),
                                     reinterpret_cast<fftw_complex*>(spec_buf_.data()),
                                     FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_c2r_3d(n_, n_, n_,
                                     reinterpret_cast<fftw_complex*>(spec_buf_.data()),
                                     real_buf_.data(), FFTW_ESTIMATE);
    if (plan_fwd_ == nullptr || plan_bwd_ == nullptr)
        throw std::runtime_error("SpectralWorkspace: FFT plan creation failed");
}

SpectralWorkspace::~SpectralWorkspace() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

Vec3 SpectralWorkspace::wavevector(int ix, int iy, int iz) const {
    const double unit = 2.0 * std::numbers::pi / box_length_;
    return Vec3{unit * signed_index(ix), unit * signed_index(iy), unit * signed_index(iz)};
}

void SpectralWorkspace::forward(const std::vector<double>& field, std::vector<complex>& spec) {
    if (field.size() != n_real())
        throw std::invalid_argument("SpectralWorkspace::forward: field size mismatch");
    spec.resize(n_spec());
    std::memcpy(real_buf_.data(), field.data(), n_real() * sizeof(double));
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    const double scale = 1.0 / static_cast<double>(n_real());
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] = spec_buf_[i] * scale;
}

void SpectralWorkspace::inverse(const std::vector<complex>& spec, std::vector<double>& field) {
    if (spec.size() != n_spec())
        throw std::invalid_argument("SpectralWorkspace::inverse: spectrum size mismatch");
    field.resize(n_real());
    // The c2r transform destroys its input, so it runs on the scratch copy.
    std::memcpy(spec_buf_.data(), spec.data(), n_spec() * sizeof(complex));
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    std::memcpy(field.data(), real_buf_.data(), n_real() * sizeof(double));
}

bool SpectralWorkspace::retained(int ix, int iy, int iz, int cutoff) const {
    const int jx = std::abs(signed_index(ix));
    const int jy = std::abs(signed_index(iy));
    const int jz = std::abs(signed_index(iz));
    const int j = jx > jy ? (jx > jz ? jx : jz) : (jy > jz ? jy : jz);
    return j <= cutoff;
}

void SpectralWorkspace::dealias(std::vector<complex>& spec, int cutoff) const {
    if (spec.size() != n_spec())
        throw std::invalid_argument("SpectralWorkspace::dealias: spectrum size mismatch");
    const int nzh = n_ / 2 + 1;
    std::size_t idx = 0;
    for (int ix = 0; ix < n_; ++ix) {
        const int jx = std::abs(signed_index(ix));
        for (int iy = 0; iy < n_; ++iy) {
            const int jy = std::abs(signed_index(iy));
            const int jxy = jx > jy ? jx : jy;
            for (int iz = 0; iz < nzh; ++iz, ++idx) {
                if (jxy > cutoff || iz > cutoff) spec[idx] = complex{};
            }
        }
    }
}

double spectral_norm2(const SpectralWorkspace& ws, const std::vector<complex>& spec) {
    if (spec.size() != ws.n_spec())
        throw std::invalid_argument("spectral_norm2: spectrum size mismatch");
    const int n = ws.n();
    const int nzh = n / 2 + 1;
    double total = 0.0;
    std::size_t idx = 0;
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            for (int iz = 0; iz < nzh; ++iz, ++idx)
                total += ws.hermitian_weight(iz) * std::norm(spec[idx]);
    return total;
}

}  // namespace nsm
