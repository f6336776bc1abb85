// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "camsim/render.hpp"
#include "camsim/spectral_data.hpp"

using namespace camsim;

namespace {

const WavelengthGrid kGrid(500, 50, 3);  // small grid keeps traces cheap

SceneGraph furnace_scene(double rho, double emitted, int res = 24) {
    // Closed cube, every wall both emits L_e and reflects rho: the rendering
    // equation gives a uniform field L_e / (1 - rho).
    SceneGraph scene;
    scene.materials.push_back(
        {"gray", SpectralDistribution::constant(kGrid, rho, SpectralUnit::Reflectance)});
    const double s = 1.0;
    const auto quads = make_box_quads({0.5, 0.5, 0.5}, {s, s, s}, 0.0);
    int i = 0;
    for (const Quad& q : quads) {
        AreaLight wall;
        wall.quad = q;
        wall.spd = SpectralDistribution::constant(kGrid, emitted, SpectralUnit::Radiance);
        wall.two_sided = true;
        wall.material = "gray";
        wall.name = "wall" + std::to_string(i++);
        scene.lights.push_back(std::move(wall));
    }
    scene.camera.position = {0.5, 0.5, 0.2};
    scene.camera.look_at = {0.5, 0.5, 1.0};
    scene.camera.focal_length_mm = 4.0;
    scene.camera.sensor_width_mm = 3.0;
    scene.camera.sensor_height_mm = 3.0;
    scene.camera.res_x = res;
    scene.camera.res_y = res;
    return scene;
}

double furnace_error(int spp, double rho, double emitted) {
    RenderConfig cfg;
    cfg.samples_per_pixel = spp;
    cfg.max_depth = 64;
    cfg.russian_roulette_start_depth = 4;
    cfg.grid = kGrid;
    cfg.seed = 99;
    const RadianceCube cube = render(furnace_scene(rho, emitted), cfg);
    const double expected = emitted / (1.0 - rho);
    double err = 0.0;
    long n = 0;
    for (double v : cube.values) {
        err += std::abs(v - expected);
        ++n;
    }
    return err / n / expected;
}

}  // namespace

TEST_CASE("white furnace converges to the analytic closed form") {
    const double rho = 0.5, emitted = 2.0;
    RenderConfig cfg;
    cfg.samples_per_pixel = 256;
    cfg.max_depth = 64;
    cfg.russian_roulette_start_depth = 4;
    cfg.grid = kGrid;
    cfg.seed = 7;
    const RadianceCube cube = render(furnace_scene(rho, emitted), cfg);
    const double expected = emitted / (1.0 - rho);

    // Pixels are i.i.d.; compare the image mean against 3 sigma of its own
    // spread (band 0).
    const double* plane = cube.plane(0);
    const size_t n = static_cast<size_t>(cube.width) * cube.height;
    double mean = 0;
    for (size_t i = 0; i < n; ++i) mean += plane[i];
    mean /= static_cast<double>(n);
    double var = 0;
    for (size_t i = 0; i < n; ++i) var += (plane[i] - mean) * (plane[i] - mean);
    var /= static_cast<double>(n - 1);
    const double sigma_mean = std::sqrt(var / static_cast<double>(n));
    CHECK(std::abs(mean - expected) <= 3.0 * sigma_mean + 1e-9);
    CHECK(std::abs(mean - expected) / expected < 0.02);
}

TEST_CASE("furnace error shrinks like one over root spp") {
    const double e16 = furnace_error(16, 0.5, 1.0);
    const double e64 = furnace_error(64, 0.5, 1.0);
    const double e256 = furnace_error(256, 0.5, 1.0);
    CHECK(e64 < e16);
    CHECK(e256 < e64);
    // Mean absolute error should fall roughly 2x per 4x samples; allow slack.
    CHECK(e256 < e16 * 0.5);
}

TEST_CASE("zero-reflectance box shows the light only") {
    SceneGraph scene = build_cornell_box();
    for (auto& m : scene.materials)
        m.reflectance = SpectralDistribution::constant(m.reflectance.grid, 0.0,
                                                       SpectralUnit::Reflectance);
    // Look straight up at the ceiling so some pixels see the light quad.
    scene.camera.position = {0.275, 0.1, 0.275};
    scene.camera.look_at = {0.275, 0.55, 0.275};
    scene.camera.up = {1.0, 0.0, 0.0};
    scene.camera.res_x = 32;
    scene.camera.res_y = 32;

    RenderConfig cfg;
    cfg.samples_per_pixel = 16;
    cfg.max_depth = 4;
    cfg.seed = 5;
    const RadianceCube cube = render(scene, cfg);
    double total = 0.0;
    int lit = 0, dark = 0;
    for (int y = 0; y < cube.height; ++y)
        for (int x = 0; x < cube.width; ++x) {
            double s = 0;
            for (int b = 0; b < cube.grid.count; ++b) s += cube.at(x, y, b);
            total += s;
            (s > 0 ? lit : dark)++;
        }
    CHECK(total > 0.0);
    CHECK(lit > 0);
    CHECK(dark > 0);  // ceiling ring stays dark when nothing reflects
}

TEST_CASE("direct light estimate matches the hand formula") {
    // Light quad of area A parallel to the floor, surface point straight
    // below at distance d, both cosines ~ 1.
    SceneGraph scene;
    scene.materials.push_back(
        {"half", SpectralDistribution::constant(kGrid, 0.6, SpectralUnit::Reflectance)});
    AreaLight light;
    const double a = 0.01;  // 1 cm quad
    light.quad = Quad(Vec3{-a / 2, 1.0, -a / 2}, Vec3{a / 2, 1.0, -a / 2},
                      Vec3{a / 2, 1.0, a / 2}, Vec3{-a / 2, 1.0, a / 2});
    light.spd = SpectralDistribution::constant(kGrid, 3.0, SpectralUnit::Radiance);
    light.name = "patch";
    scene.lights.push_back(light);
    scene.camera.position = {0, 0.5, -2};
    scene.camera.look_at = {0, 0.5, 0};
    scene.camera.res_x = scene.camera.res_y = 8;

    const auto albedo = SpectralDistribution::constant(kGrid, 0.6, SpectralUnit::Reflectance);
    Rng rng(1, 0, 0);
    const SpectralDistribution est =
        direct_light_estimate(scene, {0, 0, 0}, {0, 1, 0}, albedo, 0, rng, kGrid);
    // rho/pi * L * A / d^2; the quad is tiny so the cosine spread is ~ 1.
    const double expected = 0.6 / constants::pi * 3.0 * a * a / 1.0;
    for (int b = 0; b < kGrid.count; ++b)
        CHECK(est[b] == doctest::Approx(expected).epsilon(2e-4));

    // Linear in the emitted radiance.
    for (double& v : scene.lights[0].spd.values) v *= 5.0;
    Rng rng2(1, 0, 0);
    const SpectralDistribution est5 =
        direct_light_estimate(scene, {0, 0, 0}, {0, 1, 0}, albedo, 0, rng2, kGrid);
    for (int b = 0; b < kGrid.count; ++b)
        CHECK(est5[b] == doctest::Approx(5.0 * est[b]).epsilon(1e-12));

    // Occluded point gives exactly zero.
    scene.materials.push_back(
        {"block", SpectralDistribution::constant(kGrid, 0.2, SpectralUnit::Reflectance)});
    scene.primitives.push_back(
        {Quad(Vec3{-0.2, 0.5, -0.2}, Vec3{0.2, 0.5, -0.2}, Vec3{0.2, 0.5, 0.2},
              Vec3{-0.2, 0.5, 0.2}),
         1, -1, "blocker"});
    Rng rng3(1, 0, 0);
    const SpectralDistribution blocked =
        direct_light_estimate(scene, {0, 0, 0}, {0, 1, 0}, albedo, 0, rng3, kGrid);
    for (int b = 0; b < kGrid.count; ++b) CHECK(blocked[b] == 0.0);
}

TEST_CASE("determinism: parallel equals serial bitwise, reruns identical") {
    SceneGraph scene = build_cornell_box();
    scene.camera.res_x = 24;
    scene.camera.res_y = 18;
    RenderConfig cfg;
    cfg.samples_per_pixel = 8;
    cfg.max_depth = 4;
    cfg.seed = 123;
    const RadianceCube a = render(scene, cfg);
    const RadianceCube b = render_serial(scene, cfg);
    const RadianceCube c = render(scene, cfg);
    CHECK(a.values == b.values);
    CHECK(a.values == c.values);

    cfg.seed = 124;
    const RadianceCube d = render(scene, cfg);
    CHECK(a.values != d.values);
}

TEST_CASE("radiance is non-negative") {
    SceneGraph scene = build_cornell_box();
    scene.camera.res_x = 16;
    scene.camera.res_y = 12;
    RenderConfig cfg;
    cfg.samples_per_pixel = 4;
    cfg.max_depth = 6;
    const RadianceCube cube = render(scene, cfg);
    for (double v : cube.values) CHECK(v >= 0.0);
}

TEST_CASE("interreflection tints the wall-facing side of the left block") {
    SceneGraph scene = build_cornell_box();
    scene.camera.res_x = 64;
    scene.camera.res_y = 48;
    RenderConfig cfg;
    cfg.samples_per_pixel = 96;
    cfg.max_depth = 5;
    cfg.seed = 17;
    const RadianceCube cube = render(scene, cfg);

    // Project a point through the camera to find its pixel.
    const PinholeCamera& cam = scene.camera;
    const Vec3 fwd = normalize(cam.look_at - cam.position);
    const Vec3 right = normalize(cross(fwd, cam.up));
    const Vec3 up = cross(right, fwd);
    auto project = [&](const Vec3& p, int* px, int* py) {
        const Vec3 d = p - cam.position;
        const double z = dot(d, fwd);
        REQUIRE(z > 0);
        const double sx = dot(d, right) / z * cam.focal_length_mm;
        const double sy = dot(d, up) / z * cam.focal_length_mm;
        *px = static_cast<int>((sx / cam.sensor_width_mm + 0.5) * cam.res_x);
        *py = static_cast<int>((0.5 - sy / cam.sensor_height_mm) * cam.res_y);
    };

    // Face centers of the left (short) block; make_box_quads face order is
    // -z, +z, -x, +x, +y, -y.
    const auto quads = make_box_quads({0.336 * 0.55, 0.15 * 0.55, 0.307 * 0.55},
                                      {0.3 * 0.55, 0.3 * 0.55, 0.3 * 0.55}, -17.0);
    const Vec3 front_center = quads[0].centroid();
    const Vec3 left_center = quads[2].centroid();

    auto band_ratio = [&](const Vec3& at) {
        int px = 0, py = 0;
        project(at, &px, &py);
        double r = 0, g = 0;
        int nr = 0, ng = 0;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
                for (int b = 0; b < cube.grid.count; ++b) {
                    const double lam = cube.grid.wavelength(b);
                    const double v = cube.at(px + dx, py + dy, b);
                    if (lam >= 600) r += v, ++nr;
                    if (lam >= 500 && lam <= 570) g += v, ++ng;
                }
        return (r / nr) / (g / ng);
    };

    CHECK(band_ratio(left_center) > band_ratio(front_center));
}

TEST_CASE("scale_to_luminance") {
    SceneGraph scene = build_cornell_box();
    scene.camera.res_x = 16;
    scene.camera.res_y = 12;
    RenderConfig cfg;
    cfg.samples_per_pixel = 8;
    cfg.max_depth = 3;
    const RadianceCube cube = render(scene, cfg);
    const RadianceCube scaled = scale_to_luminance(cube, 21.5);
    CHECK(mean_luminance(scaled) == doctest::Approx(21.5).epsilon(1e-9));

    const RadianceCube same = scale_to_luminance(scaled, 21.5);
    for (size_t i = 0; i < same.values.size(); ++i)
        CHECK(same.values[i] == doctest::Approx(scaled.values[i]).epsilon(1e-12));

    const RadianceCube dark = scale_to_luminance(cube, 0.0);
    for (double v : dark.values) CHECK(v == 0.0);

    RadianceCube zero(4, 4, cube.grid, SpectralUnit::Radiance);
    CHECK_THROWS_AS(scale_to_luminance(zero, 10.0), Error);
}
