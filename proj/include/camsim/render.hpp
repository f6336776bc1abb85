// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "camsim/raster.hpp"
#include "camsim/rng.hpp"
#include "camsim/scene.hpp"

namespace camsim {

struct RenderConfig {
    int samples_per_pixel = 256;
    int max_depth = 10;                    // surface hits per path
    int russian_roulette_start_depth = 5;  // roulette from this bounce on
    uint64_t seed = 0;
    WavelengthGrid grid = default_grid();

    void validate() const {
        check(samples_per_pixel >= 1, "render: samples_per_pixel must be >= 1");
        check(max_depth >= 1, "render: max_depth must be >= 1");
    }
};

/// Spectral radiance arriving at the camera, one estimate per pixel.
/// Lambertian BRDF rho/pi, next-event estimation toward the area lights,
/// cosine-weighted indirect bounces, Russian roulette past the configured
/// depth. Deterministic for a fixed seed at any thread count (per-pixel
/// counter-based RNG streams).
RadianceCube render(const SceneGraph& scene, const RenderConfig& config);

/// Plain double-loop reference; bitwise-identical to render().
RadianceCube render_serial(const SceneGraph& scene, const RenderConfig& config);

/// One-sample area-light estimate at a surface point:
/// L_e * (rho/pi) * cos_surface * cos_light * A / d^2, zero when occluded or
/// facing away. `albedo` is the surface reflectance at the hit point.
SpectralDistribution direct_light_estimate(const SceneGraph& scene, const Vec3& hit_point,
                                           const Vec3& normal, const SpectralDistribution& albedo,
                                           int light_index, Rng& rng,
                                           const WavelengthGrid& grid);

/// Uniform rescale so the image's mean photometric luminance equals `target`.
RadianceCube scale_to_luminance(const RadianceCube& cube, double target_cd_m2);

/// Mean luminance of the cube (luminance of the pixel-averaged spectrum).
double mean_luminance(const RadianceCube& cube);

}  // namespace camsim
