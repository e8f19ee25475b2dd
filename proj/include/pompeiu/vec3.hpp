#pragma once

#include <cmath>
#include <complex>

namespace pompeiu {

using Complex = std::complex<double>;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator*(const Vec3& a, double s) { return s * a; }
inline Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }
inline Vec3& operator+=(Vec3& a, const Vec3& b) { a = a + b; return a; }
inline Vec3& operator-=(Vec3& a, const Vec3& b) { a = a - b; return a; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm_squared(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm_squared(a)); }

inline Vec3 normalized(const Vec3& a) {
    const double n = norm(a);
    return {a.x / n, a.y / n, a.z / n};
}

/// Complex-valued 3-vector (field gradients and the like).
struct CVec3 {
    Complex x{};
    Complex y{};
    Complex z{};
};

inline CVec3 operator+(const CVec3& a, const CVec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline CVec3& operator+=(CVec3& a, const CVec3& b) { a = a + b; return a; }
inline CVec3 operator*(const Complex& s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline CVec3 operator*(const Complex& s, const CVec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline CVec3 operator*(double s, const CVec3& a) { return {s * a.x, s * a.y, s * a.z}; }

inline Complex dot(const CVec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline double norm(const CVec3& a) {
    return std::sqrt(std::norm(a.x) + std::norm(a.y) + std::norm(a.z));
}

}  // namespace pompeiu
