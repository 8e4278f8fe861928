// Small fixed-size vector algebra used throughout: real 3-vectors, complex
// 3-vectors, and orthonormal frames (T, e1, e2) with N = e1 + i e2.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace filament {

using cplx = std::complex<double>;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    if (!(n > 0.0)) throw std::domain_error("normalized(): zero-length vector");
    return v / n;
}

// Unit direction; renormalizes on construction so |v| = 1 to ~1e-16.
struct UnitVec3 : Vec3 {
    UnitVec3() : Vec3(1.0, 0.0, 0.0) {}
    explicit UnitVec3(const Vec3& v) : Vec3(normalized(v)) {}
    UnitVec3(double x_, double y_, double z_) : UnitVec3(Vec3{x_, y_, z_}) {}
};

// Complex 3-vector (componentwise), e.g. values of the Fourier transform of T_x.
struct CVec3 {
    cplx x{0.0, 0.0}, y{0.0, 0.0}, z{0.0, 0.0};

    CVec3() = default;
    CVec3(cplx x_, cplx y_, cplx z_) : x(x_), y(y_), z(z_) {}
    explicit CVec3(const Vec3& v) : x(v.x), y(v.y), z(v.z) {}

    CVec3 operator+(const CVec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    CVec3 operator-(const CVec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    CVec3 operator*(cplx s) const { return {x * s, y * s, z * s}; }
};

inline CVec3 operator*(cplx s, const CVec3& v) { return v * s; }
inline CVec3 conj(const CVec3& v) { return {std::conj(v.x), std::conj(v.y), std::conj(v.z)}; }
inline double norm(const CVec3& v) {
    return std::sqrt(std::norm(v.x) + std::norm(v.y) + std::norm(v.z));
}

// Orthonormal frame with complex normal N = e1 + i e2.
struct Frame {
    Vec3 T{1.0, 0.0, 0.0};
    Vec3 e1{0.0, 1.0, 0.0};
    Vec3 e2{0.0, 0.0, 1.0};

    // Largest deviation from orthonormality across the six Gram conditions.
    double orthonormality_defect() const {
        double d = 0.0;
        d = std::max(d, std::abs(dot(T, T) - 1.0));
        d = std::max(d, std::abs(dot(e1, e1) - 1.0));
        d = std::max(d, std::abs(dot(e2, e2) - 1.0));
        d = std::max(d, std::abs(dot(T, e1)));
        d = std::max(d, std::abs(dot(T, e2)));
        d = std::max(d, std::abs(dot(e1, e2)));
        return d;
    }

    double determinant() const { return dot(cross(T, e1), e2); }

    // Modified Gram-Schmidt back onto the constraint manifold.
    void orthonormalize() {
        T = normalized(T);
        e1 = normalized(e1 - dot(e1, T) * T);
        e2 = normalized(e2 - dot(e2, T) * T - dot(e2, e1) * e1);
    }
};

inline double frame_dist(const Frame& a, const Frame& b) {
    return std::max({dist(a.T, b.T), dist(a.e1, b.e1), dist(a.e2, b.e2)});
}

}  // namespace filament
