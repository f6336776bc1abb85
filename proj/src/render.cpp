// SPDX-License-Identifier: Apache-2.0
#include "camsim/render.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace camsim {

namespace {

constexpr double kRayEps = 1e-6;  // meters

/// Scene flattened for tracing: reflectances and SPDs resampled onto the
/// render grid, lights and matte primitives in one intersection list.
struct Surface {
    Quad quad;
    Vec3 normal;                  // geometric normal from winding
    Vec3 edge_u, edge_v;          // parallelogram edges for light sampling
    double area = 0.0;
    std::vector<double> albedo;   // empty = black absorber
    std::vector<double> emission; // empty = not a light
    bool two_sided_emit = false;
};

struct TraceScene {
    std::vector<Surface> surfaces;
    std::vector<int> lights;  // indices into surfaces
    int bands = 0;
};

TraceScene compile(const SceneGraph& scene, const WavelengthGrid& grid) {
    scene.validate();
    TraceScene ts;
    ts.bands = grid.count;
    for (const auto& prim : scene.primitives) {
        Surface s;
        s.quad = prim.quad;
        s.normal = prim.quad.normal();
        s.albedo = resample(scene.materials[prim.material].reflectance, grid).values;
        ts.surfaces.push_back(std::move(s));
    }
    for (const auto& light : scene.lights) {
        Surface s;
        s.quad = light.quad;
        s.normal = light.quad.normal();
        s.edge_u = light.quad.p[1] - light.quad.p[0];
        s.edge_v = light.quad.p[3] - light.quad.p[0];
        s.area = length(cross(s.edge_u, s.edge_v));
        s.emission = resample(light.spd, grid).values;
        s.two_sided_emit = light.two_sided;
        if (!light.material.empty()) {
            const int m = scene.material_index(light.material);
            s.albedo = resample(scene.materials[m].reflectance, grid).values;
        }
        ts.lights.push_back(static_cast<int>(ts.surfaces.size()));
        ts.surfaces.push_back(std::move(s));
    }
    return ts;
}

struct Hit {
    int surface = -1;
    double t = 0.0;
};

Hit intersect(const TraceScene& ts, const Ray& ray, double t_min) {
    Hit hit;
    double best = 1e30;
    for (size_t i = 0; i < ts.surfaces.size(); ++i) {
        const double t = intersect_quad(ray, ts.surfaces[i].quad, t_min);
        if (t > 0.0 && t < best) {
            best = t;
            hit.surface = static_cast<int>(i);
            hit.t = t;
        }
    }
    return hit;
}

bool occluded(const TraceScene& ts, const Vec3& from, const Vec3& to) {
    const Vec3 d = to - from;
    const double dist = length(d);
    if (dist <= kRayEps) return false;
    const Ray shadow{from, d * (1.0 / dist)};
    for (const auto& s : ts.surfaces) {
        const double t = intersect_quad(shadow, s.quad, kRayEps);
        if (t > 0.0 && t < dist - kRayEps) return true;
    }
    return false;
}

/// One-sample next-event estimate for light `li`, accumulated into `out`
/// scaled by `weight * throughput`.
void sample_light(const TraceScene& ts, int li, const Vec3& p, const Vec3& n,
                  const std::vector<double>& albedo, const std::vector<double>& throughput,
                  double weight, Rng& rng, std::vector<double>& out) {
    const Surface& light = ts.surfaces[li];
    const double u = rng.uniform();
    const double v = rng.uniform();
    const Vec3 q = light.quad.p[0] + light.edge_u * u + light.edge_v * v;
    const Vec3 d = q - p;
    const double dist2 = dot(d, d);
    if (dist2 <= kRayEps * kRayEps) return;
    const double dist = std::sqrt(dist2);
    const Vec3 wi = d * (1.0 / dist);
    const double cos_s = dot(n, wi);
    if (cos_s <= 0.0) return;
    double cos_l = dot(light.normal, -wi);
    if (light.two_sided_emit) cos_l = std::abs(cos_l);
    if (cos_l <= 0.0) return;
    if (occluded(ts, p + n * kRayEps, q)) return;
    const double geom = weight * cos_s * cos_l * light.area / dist2 / constants::pi;
    for (int b = 0; b < ts.bands; ++b)
        out[b] += throughput[b] * albedo[b] * light.emission[b] * geom;
}

Vec3 cosine_sample_hemisphere(const Vec3& n, double u1, double u2) {
    const double r = std::sqrt(u1);
    const double phi = 2.0 * constants::pi * u2;
    // Build an orthonormal basis around n.
    const Vec3 a = std::abs(n.x) > 0.9 ? Vec3{0, 1, 0} : Vec3{1, 0, 0};
    const Vec3 t = normalize(cross(a, n));
    const Vec3 b = cross(n, t);
    const double z = std::sqrt(std::max(0.0, 1.0 - u1));
    return t * (r * std::cos(phi)) + b * (r * std::sin(phi)) + n * z;
}

struct CameraFrame {
    Vec3 origin, forward, right, up;
    double half_w, half_h;  // sensor half extents over focal length

    explicit CameraFrame(const PinholeCamera& cam) {
        origin = cam.position;
        forward = normalize(cam.look_at - cam.position);
        right = normalize(cross(forward, cam.up));
        up = cross(right, forward);
        half_w = 0.5 * cam.sensor_width_mm / cam.focal_length_mm;
        half_h = 0.5 * cam.sensor_height_mm / cam.focal_length_mm;
    }

    /// u, v in [0,1): image plane position (v down the image).
    Ray ray(double u, double v) const {
        const Vec3 dir = forward + right * ((2.0 * u - 1.0) * half_w) +
                         up * ((1.0 - 2.0 * v) * half_h);
        return {origin, normalize(dir)};
    }
};

void trace_pixel(const TraceScene& ts, const CameraFrame& cam, const RenderConfig& config,
                 int px, int py, int width, int height, std::vector<double>& out) {
    const int nb = ts.bands;
    out.assign(nb, 0.0);
    std::vector<double> throughput(nb);
    std::vector<double> radiance(nb);
    const uint64_t pixel_id = static_cast<uint64_t>(py) * width + px;
    const double n_lights = static_cast<double>(ts.lights.size());

    for (int s = 0; s < config.samples_per_pixel; ++s) {
        Rng rng(config.seed, pixel_id, static_cast<uint32_t>(s));
        const double u = (px + rng.uniform()) / width;
        const double v = (py + rng.uniform()) / height;
        Ray ray = cam.ray(u, v);
        std::fill(throughput.begin(), throughput.end(), 1.0);
        std::fill(radiance.begin(), radiance.end(), 0.0);

        for (int depth = 0; depth < config.max_depth; ++depth) {
            const Hit hit = intersect(ts, ray, kRayEps);
            if (hit.surface < 0) break;
            const Surface& surf = ts.surfaces[hit.surface];
            const Vec3 p = ray.origin + ray.dir * hit.t;
            const bool front = dot(surf.normal, ray.dir) < 0.0;
            const Vec3 n = front ? surf.normal : -surf.normal;

            // Emission is counted on camera-direct hits only; later vertices
            // get light through next-event estimation.
            if (!surf.emission.empty() && depth == 0 && (front || surf.two_sided_emit))
                for (int b = 0; b < nb; ++b) radiance[b] += throughput[b] * surf.emission[b];

            if (surf.albedo.empty()) break;  // pure emitter / absorber

            // Next-event estimation: one uniformly chosen light.
            if (!ts.lights.empty()) {
                const int pick = std::min(static_cast<int>(rng.uniform() * n_lights),
                                          static_cast<int>(n_lights) - 1);
                sample_light(ts, ts.lights[pick], p, n, surf.albedo, throughput, n_lights, rng,
                             radiance);
            }

            if (depth + 1 >= config.max_depth) break;

            for (int b = 0; b < nb; ++b) throughput[b] *= surf.albedo[b];

            if (depth + 1 >= config.russian_roulette_start_depth) {
                double peak = 0.0;
                for (int b = 0; b < nb; ++b) peak = std::max(peak, throughput[b]);
                const double survive = std::clamp(peak, 0.05, 0.95);
                if (rng.uniform() >= survive) break;
                const double inv = 1.0 / survive;
                for (int b = 0; b < nb; ++b) throughput[b] *= inv;
            }

            ray = {p + n * kRayEps, cosine_sample_hemisphere(n, rng.uniform(), rng.uniform())};
        }

        for (int b = 0; b < nb; ++b) out[b] += radiance[b];
    }

    const double inv_spp = 1.0 / config.samples_per_pixel;
    for (int b = 0; b < nb; ++b) out[b] *= inv_spp;
}

RadianceCube render_impl(const SceneGraph& scene, const RenderConfig& config, bool parallel) {
    config.validate();
    const TraceScene ts = compile(scene, config.grid);
    const CameraFrame cam(scene.camera);
    const int width = scene.camera.res_x;
    const int height = scene.camera.res_y;
    RadianceCube cube(width, height, config.grid, SpectralUnit::Radiance);

    if (parallel) {
#pragma omp parallel
        {
            std::vector<double> spectrum;
#pragma omp for schedule(dynamic, 4)
            for (int y = 0; y < height; ++y) {
                for (int x = 0; x < width; ++x) {
                    trace_pixel(ts, cam, config, x, y, width, height, spectrum);
                    for (int b = 0; b < cube.grid.count; ++b) cube.at(x, y, b) = spectrum[b];
                }
            }
        }
    } else {
        std::vector<double> spectrum;
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) {
                trace_pixel(ts, cam, config, x, y, width, height, spectrum);
                for (int b = 0; b < cube.grid.count; ++b) cube.at(x, y, b) = spectrum[b];
            }
    }
    return cube;
}

}  // namespace

RadianceCube render(const SceneGraph& scene, const RenderConfig& config) {
    return render_impl(scene, config, true);
}

RadianceCube render_serial(const SceneGraph& scene, const RenderConfig& config) {
    return render_impl(scene, config, false);
}

SpectralDistribution direct_light_estimate(const SceneGraph& scene, const Vec3& hit_point,
                                           const Vec3& normal, const SpectralDistribution& albedo,
                                           int light_index, Rng& rng,
                                           const WavelengthGrid& grid) {
    check(light_index >= 0 && light_index < static_cast<int>(scene.lights.size()),
          "direct_light_estimate: light index out of range");
    const TraceScene ts = compile(scene, grid);
    const std::vector<double> rho = resample(albedo, grid).values;
    std::vector<double> throughput(grid.count, 1.0);
    std::vector<double> out(grid.count, 0.0);
    sample_light(ts, ts.lights[light_index], hit_point, normalize(normal), rho, throughput, 1.0,
                 rng, out);
    return SpectralDistribution(grid, std::move(out), SpectralUnit::Radiance);
}

double mean_luminance(const RadianceCube& cube) {
    std::vector<double> mean(cube.grid.count, 0.0);
    const size_t npix = static_cast<size_t>(cube.width) * cube.height;
    for (int b = 0; b < cube.grid.count; ++b) {
        const double* plane = cube.plane(b);
        double sum = 0.0;
        for (size_t i = 0; i < npix; ++i) sum += plane[i];
        mean[b] = sum / static_cast<double>(npix);
    }
    return luminance(SpectralDistribution(cube.grid, std::move(mean), SpectralUnit::Radiance));
}

RadianceCube scale_to_luminance(const RadianceCube& cube, double target_cd_m2) {
    check(cube.unit == SpectralUnit::Radiance, "scale_to_luminance: radiance cube required");
    check(target_cd_m2 >= 0.0, "scale_to_luminance: target must be non-negative");
    const double current = mean_luminance(cube);
    check(current > 0.0, "scale_to_luminance: cube has zero luminance");
    RadianceCube out = cube;
    const double scale = target_cd_m2 / current;
    for (double& v : out.values) v *= scale;
    return out;
}

}  // namespace camsim
