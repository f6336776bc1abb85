// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>

#include "camsim/common.hpp"

namespace camsim {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x; y += o.y; z += o.z;
        return *this;
    }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalize(const Vec3& v) {
    const double len = length(v);
    check(len > 0.0, "normalize: zero-length vector");
    return v * (1.0 / len);
}

struct Ray {
    Vec3 origin;
    Vec3 dir;  // unit length
};

/// Planar quad given by four corners in winding order. Intersection treats it
/// as two triangles, so mildly non-planar inputs still behave sensibly; the
/// scene validator enforces planarity at construction.
struct Quad {
    std::array<Vec3, 4> p;

    Quad() = default;
    Quad(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) : p{a, b, c, d} {}

    Vec3 normal() const { return normalize(cross(p[1] - p[0], p[3] - p[0])); }
    double area() const {
        return 0.5 * (length(cross(p[1] - p[0], p[2] - p[0])) +
                      length(cross(p[2] - p[0], p[3] - p[0])));
    }
    Vec3 centroid() const { return (p[0] + p[1] + p[2] + p[3]) * 0.25; }
    /// Max corner distance from the best-fit plane, relative to the diagonal.
    double planarity_error() const;
    /// Point from bilinear coordinates (u, v) in [0,1]^2.
    Vec3 point_at(double u, double v) const {
        const Vec3 a = p[0] * (1 - u) + p[1] * u;
        const Vec3 b = p[3] * (1 - u) + p[2] * u;
        return a * (1 - v) + b * v;
    }
};

/// Moller-Trumbore; returns hit distance t > t_min or a negative value.
double intersect_triangle(const Ray& r, const Vec3& v0, const Vec3& v1, const Vec3& v2,
                          double t_min);

/// Nearest intersection with the quad (two triangles); negative if missed.
double intersect_quad(const Ray& r, const Quad& q, double t_min);

}  // namespace camsim
