// SPDX-License-Identifier: Apache-2.0
#include "camsim/geometry.hpp"

namespace camsim {

double Quad::planarity_error() const {
    const Vec3 n = normalize(cross(p[1] - p[0], p[3] - p[0]));
    const double diag = length(p[2] - p[0]);
    if (diag <= 0.0) return 1.0;
    double worst = 0.0;
    for (const Vec3& v : p) worst = std::max(worst, std::abs(dot(v - p[0], n)));
    return worst / diag;
}

double intersect_triangle(const Ray& r, const Vec3& v0, const Vec3& v1, const Vec3& v2,
                          double t_min) {
    constexpr double kEps = 1e-12;
    const Vec3 e1 = v1 - v0;
    const Vec3 e2 = v2 - v0;
    const Vec3 pv = cross(r.dir, e2);
    const double det = dot(e1, pv);
    if (std::abs(det) < kEps) return -1.0;
    const double inv_det = 1.0 / det;
    const Vec3 tv = r.origin - v0;
    const double u = dot(tv, pv) * inv_det;
    if (u < 0.0 || u > 1.0) return -1.0;
    const Vec3 qv = cross(tv, e1);
    const double v = dot(r.dir, qv) * inv_det;
    if (v < 0.0 || u + v > 1.0) return -1.0;
    const double t = dot(e2, qv) * inv_det;
    return t > t_min ? t : -1.0;
}

double intersect_quad(const Ray& r, const Quad& q, double t_min) {
    const double t0 = intersect_triangle(r, q.p[0], q.p[1], q.p[2], t_min);
    const double t1 = intersect_triangle(r, q.p[0], q.p[2], q.p[3], t_min);
    if (t0 < 0.0) return t1;
    if (t1 < 0.0) return t0;
    return std::min(t0, t1);
}

}  // namespace camsim
