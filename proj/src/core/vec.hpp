#pragma once

#include <array>
#include <cmath>

namespace rgkit {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return (&x)[i]; }
    double operator[](int i) const { return (&x)[i]; }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double c) const { return {c * x, c * y, c * z}; }
    Vec3 operator/(double c) const { return {x / c, y / c, z / c}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double c) { x *= c; y *= c; z *= c; return *this; }

    friend Vec3 operator*(double c, const Vec3& v) { return v * c; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }
inline Vec3 normalized(const Vec3& v) { return v / norm(v); }

// Component-wise reduction to [0,1).
inline double wrap01(double u) {
    double w = u - std::floor(u);
    return (w >= 1.0) ? 0.0 : w;
}
inline Vec3 wrap01(const Vec3& v) { return {wrap01(v.x), wrap01(v.y), wrap01(v.z)}; }

// Minimum-image displacement on the unit torus: the representative of d + Z^3
// with smallest Euclidean norm (component-wise nearest integer shift).
inline double min_image(double d) { return d - std::nearbyint(d); }
inline Vec3 min_image(const Vec3& d) { return {min_image(d.x), min_image(d.y), min_image(d.z)}; }

// Distance between two torus points.
inline double torus_dist(const Vec3& a, const Vec3& b) { return norm(min_image(a - b)); }

}  // namespace rgkit
