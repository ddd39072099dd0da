#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace nsm {

using complex = std::complex<double>;

using Vec3 = std::array<double, 3>;

/** Complex 3-vector with the handful of operations the propagator algebra needs. */
struct CVec3 {
    complex x{}, y{}, z{};

    complex& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    const complex& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    CVec3 operator+(const CVec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    CVec3 operator-(const CVec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    CVec3 operator*(complex s) const { return {s * x, s * y, s * z}; }
    CVec3& operator+=(const CVec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
};

inline CVec3 operator*(complex s, const CVec3& v) { return v * s; }

/// Unconjugated dot product a.b (used with real k vectors).
inline complex dot(const Vec3& a, const CVec3& b) { return a[0] * b.x + a[1] * b.y + a[2] * b.z; }

/// Hermitian inner product (a|b) = sum_i a_i conj(b_i).
inline complex inner(const CVec3& a, const CVec3& b) {
    return a.x * std::conj(b.x) + a.y * std::conj(b.y) + a.z * std::conj(b.z);
}

inline CVec3 cross(const Vec3& a, const CVec3& b) {
    return {a[1] * b.z - a[2] * b.y, a[2] * b.x - a[0] * b.z, a[0] * b.y - a[1] * b.x};
}

inline double norm2(const CVec3& v) { return std::norm(v.x) + std::norm(v.y) + std::norm(v.z); }

inline double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

inline Vec3 scale(const Vec3& v, double s) { return {s * v[0], s * v[1], s * v[2]}; }

}  // namespace nsm
