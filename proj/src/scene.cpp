// SPDX-License-Identifier: Apache-2.0
#include "camsim/scene.hpp"

#include <cmath>

#include "camsim/spectral_data.hpp"

namespace camsim {

void PinholeCamera::validate() const {
    check(!(position == look_at), "camera: look_at must differ from position");
    check(focal_length_mm > 0.0 && sensor_width_mm > 0.0 && sensor_height_mm > 0.0,
          "camera: physical dimensions must be positive");
    check(res_x >= 1 && res_y >= 1, "camera: resolution must be positive");
    const Vec3 f = look_at - position;
    check(length(cross(f, up)) > 1e-12 * length(f) * length(up),
          "camera: up vector parallel to view direction");
}

bool PinholeCamera::operator==(const PinholeCamera& o) const {
    return position == o.position && look_at == o.look_at && up == o.up &&
           focal_length_mm == o.focal_length_mm && sensor_width_mm == o.sensor_width_mm &&
           sensor_height_mm == o.sensor_height_mm && res_x == o.res_x && res_y == o.res_y;
}

void AreaLight::validate() const {
    check(quad.area() > 0.0, "light '" + name + "': zero-area quad");
    check(quad.planarity_error() < 1e-6, "light '" + name + "': quad not planar");
    // Light sampling assumes a parallelogram.
    const Vec3 gap = quad.p[2] - (quad.p[1] + (quad.p[3] - quad.p[0]));
    check(length(gap) < 1e-9 + 1e-6 * length(quad.p[2] - quad.p[0]),
          "light '" + name + "': quad must be a parallelogram");
    check(spd.unit == SpectralUnit::Radiance, "light '" + name + "': SPD must be radiance");
}

void SceneGraph::validate() const {
    check(!lights.empty(), "scene: at least one light required");
    camera.validate();
    for (const auto& l : lights) {
        l.validate();
        check(l.material.empty() || material_index(l.material) >= 0,
              "light '" + l.name + "': dangling material reference");
    }
    for (const auto& prim : primitives) {
        check(prim.material >= 0 && prim.material < static_cast<int>(materials.size()),
              "primitive '" + prim.name + "': dangling material reference");
        check(prim.quad.area() > 0.0, "primitive '" + prim.name + "': degenerate quad");
        check(prim.quad.planarity_error() < 1e-6, "primitive '" + prim.name + "': quad not planar");
    }
}

int SceneGraph::material_index(const std::string& name) const {
    for (size_t i = 0; i < materials.size(); ++i)
        if (materials[i].name == name) return static_cast<int>(i);
    return -1;
}

bool SceneGraph::operator==(const SceneGraph& o) const {
    return materials == o.materials && primitives == o.primitives && lights == o.lights &&
           camera == o.camera && targets == o.targets;
}

std::vector<Quad> make_box_quads(const Vec3& center, const Vec3& size, double rotate_y_deg) {
    check(size.x > 0 && size.y > 0 && size.z > 0, "box: size must be positive");
    const double a = rotate_y_deg * constants::pi / 180.0;
    const double c = std::cos(a), s = std::sin(a);
    auto corner = [&](double sx, double sy, double sz) {
        const double x = 0.5 * size.x * sx, y = 0.5 * size.y * sy, z = 0.5 * size.z * sz;
        return Vec3{center.x + c * x + s * z, center.y + y, center.z - s * x + c * z};
    };
    // Vertices: n = -1 face, p = +1 face.
    const Vec3 nnn = corner(-1, -1, -1), pnn = corner(1, -1, -1);
    const Vec3 npn = corner(-1, 1, -1), ppn = corner(1, 1, -1);
    const Vec3 nnp = corner(-1, -1, 1), pnp = corner(1, -1, 1);
    const Vec3 npp = corner(-1, 1, 1), ppp = corner(1, 1, 1);
    return {
        Quad(nnn, pnn, ppn, npn),  // -z
        Quad(pnp, nnp, npp, ppp),  // +z
        Quad(nnp, nnn, npn, npp),  // -x
        Quad(pnn, pnp, ppp, ppn),  // +x
        Quad(npn, ppn, ppp, npp),  // +y
        Quad(nnp, pnp, pnn, nnn),  // -y
    };
}

CornellBoxParams::CornellBoxParams() {
    const double s = box_size;
    blocks = {
        {{0.336 * s, 0.15 * s, 0.307 * s}, {0.3 * s, 0.3 * s, 0.3 * s}, -17.0, "short_block"},
        {{0.664 * s, 0.3 * s, 0.638 * s}, {0.3 * s, 0.6 * s, 0.3 * s}, 17.0, "tall_block"},
    };
    camera.position = {0.5 * s, 0.5 * s, -0.8182 * s};
    camera.look_at = {0.5 * s, 0.5 * s, 0.5 * s};
}

SceneGraph build_cornell_box(const CornellBoxParams& params) {
    const double s = params.box_size;
    check(s > 0.0, "cornell box: box_size must be positive");
    check(params.hole_width > 0.0 && params.hole_depth > 0.0,
          "cornell box: light hole must have positive area");
    const double hx0 = params.hole_center_x - 0.5 * params.hole_width;
    const double hx1 = params.hole_center_x + 0.5 * params.hole_width;
    const double hz0 = params.hole_center_z - 0.5 * params.hole_depth;
    const double hz1 = params.hole_center_z + 0.5 * params.hole_depth;
    check(hx0 >= 0.0 && hx1 <= s && hz0 >= 0.0 && hz1 <= s,
          "cornell box: light hole extends outside the ceiling");

    SceneGraph scene;
    scene.camera = params.camera;

    scene.materials.push_back({"white", white_paint_reflectance(params.grid)});
    scene.materials.push_back({"red", red_paper_reflectance(params.grid)});
    scene.materials.push_back({"green", green_paper_reflectance(params.grid)});
    const int white = 0, red = 1, green = 2;

    auto add = [&](const Quad& q, int mat, const std::string& name) {
        scene.primitives.push_back({q, mat, -1, name});
    };

    // Walls; the +y ceiling is four quads framing the light hole.
    add(Quad(Vec3{0, 0, 0}, Vec3{s, 0, 0}, Vec3{s, 0, s}, Vec3{0, 0, s}), white, "floor");
    add(Quad(Vec3{0, 0, s}, Vec3{s, 0, s}, Vec3{s, s, s}, Vec3{0, s, s}), white, "back_wall");
    add(Quad(Vec3{0, 0, 0}, Vec3{0, 0, s}, Vec3{0, s, s}, Vec3{0, s, 0}), red, "left_wall");
    add(Quad(Vec3{s, 0, 0}, Vec3{s, s, 0}, Vec3{s, s, s}, Vec3{s, 0, s}), green, "right_wall");
    add(Quad(Vec3{0, s, 0}, Vec3{s, s, 0}, Vec3{s, s, hz0}, Vec3{0, s, hz0}), white, "ceiling_front");
    add(Quad(Vec3{0, s, hz1}, Vec3{s, s, hz1}, Vec3{s, s, s}, Vec3{0, s, s}), white, "ceiling_back");
    add(Quad(Vec3{0, s, hz0}, Vec3{hx0, s, hz0}, Vec3{hx0, s, hz1}, Vec3{0, s, hz1}), white, "ceiling_left");
    add(Quad(Vec3{hx1, s, hz0}, Vec3{s, s, hz0}, Vec3{s, s, hz1}, Vec3{hx1, s, hz1}), white, "ceiling_right");

    for (const BlockSpec& b : params.blocks) {
        const auto quads = make_box_quads(b.center, b.size, b.rotate_y_deg);
        for (const Quad& q : quads)
            for (const Vec3& v : q.p)
                check(v.x >= -1e-9 && v.x <= s + 1e-9 && v.y >= -1e-9 && v.y <= s + 1e-9 &&
                          v.z >= -1e-9 && v.z <= s + 1e-9,
                      "cornell box: block '" + b.name + "' does not fit inside the box");
        int face = 0;
        for (const Quad& q : quads)
            add(q, white, b.name + "_face" + std::to_string(face++));
    }

    // Area light covering the hole, just below the ceiling plane, facing down.
    const double ly = s - 1e-4;
    AreaLight light;
    light.name = "ceiling_light";
    light.quad = Quad(Vec3{hx0, ly, hz0}, Vec3{hx1, ly, hz0}, Vec3{hx1, ly, hz1}, Vec3{hx0, ly, hz1});
    SpectralDistribution spd = led_source_spd(params.grid);
    for (double& v : spd.values) v *= params.light_scale;
    light.spd = std::move(spd);
    light.two_sided = false;
    scene.lights.push_back(std::move(light));

    scene.validate();
    return scene;
}

namespace {

/// Bounding box of all non-light primitives; used for containment checks.
void scene_bounds(const SceneGraph& scene, Vec3& lo, Vec3& hi) {
    constexpr double kInf = 1e30;
    lo = {kInf, kInf, kInf};
    hi = {-kInf, -kInf, -kInf};
    for (const auto& prim : scene.primitives)
        for (const Vec3& v : prim.quad.p) {
            lo.x = std::min(lo.x, v.x); lo.y = std::min(lo.y, v.y); lo.z = std::min(lo.z, v.z);
            hi.x = std::max(hi.x, v.x); hi.y = std::max(hi.y, v.y); hi.z = std::max(hi.z, v.z);
        }
}

void check_fits(const SceneGraph& scene, const Vec3& center, double half_w, double half_h,
                const std::string& what) {
    Vec3 lo, hi;
    scene_bounds(scene, lo, hi);
    const double eps = 1e-9;
    check(center.x - half_w >= lo.x - eps && center.x + half_w <= hi.x + eps &&
              center.y - half_h >= lo.y - eps && center.y + half_h <= hi.y + eps &&
              center.z >= lo.z - eps && center.z <= hi.z + eps,
          what + ": target does not fit inside the box");
}

}  // namespace

SceneGraph place_mcc(const SceneGraph& scene, const Vec3& center, double size,
                     double margin_reflectance) {
    check(size > 0.0, "place_mcc: chart size must be positive");
    check(margin_reflectance >= 0.0 && margin_reflectance <= 1.0,
          "place_mcc: margin reflectance out of range");
    const double width = size, height = size * 2.0 / 3.0;
    check_fits(scene, center, 0.5 * width, 0.5 * height, "place_mcc");

    SceneGraph out = scene;
    const int target_idx = static_cast<int>(out.targets.size());
    out.targets.push_back(
        {TargetSpec::Kind::Mcc, center, size, 0.0, margin_reflectance});

    const WavelengthGrid grid =
        out.materials.empty() ? default_grid() : out.materials[0].reflectance.grid;
    const std::string prefix = "mcc" + std::to_string(target_idx) + "_";

    SpectralDistribution margin =
        SpectralDistribution::constant(grid, margin_reflectance, SpectralUnit::Reflectance);
    out.materials.push_back({prefix + "margin", std::move(margin), target_idx});
    const int margin_mat = static_cast<int>(out.materials.size()) - 1;

    // Chart faces -z (toward the camera side); rows run top to bottom, the
    // gray series is the bottom row. Patches sit 0.2 mm proud of the backing.
    const double z = center.z;
    const double x0 = center.x - 0.5 * width;
    const double y1 = center.y + 0.5 * height;
    const Quad backing(Vec3{x0, y1 - height, z}, Vec3{x0 + width, y1 - height, z},
                       Vec3{x0 + width, y1, z}, Vec3{x0, y1, z});
    out.primitives.push_back({backing, margin_mat, target_idx, prefix + "backing"});

    const double cell = width / 6.0;
    const double patch = cell * 0.88;
    const double zp = z - 2e-4;
    for (int row = 0; row < 4; ++row) {
        for (int col = 0; col < 6; ++col) {
            const int idx = row * 6 + col;
            out.materials.push_back({prefix + "patch" + std::to_string(idx),
                                     mcc_reflectance(idx, grid), target_idx});
            const int mat = static_cast<int>(out.materials.size()) - 1;
            const double cx = x0 + (col + 0.5) * cell;
            const double cy = y1 - (row + 0.5) * cell;
            const double h = 0.5 * patch;
            const Quad q(Vec3{cx - h, cy - h, zp}, Vec3{cx + h, cy - h, zp},
                         Vec3{cx + h, cy + h, zp}, Vec3{cx - h, cy + h, zp});
            out.primitives.push_back({q, mat, target_idx, prefix + "patch" + std::to_string(idx)});
        }
    }
    out.validate();
    return out;
}

SceneGraph place_slanted_edge(const SceneGraph& scene, const Vec3& center, double size,
                              double angle_deg) {
    check(size > 0.0, "place_slanted_edge: target size must be positive");
    check(angle_deg > 0.0 && angle_deg < 45.0,
          "place_slanted_edge: edge angle must lie in (0, 45) degrees");
    check_fits(scene, center, 0.5 * size, 0.5 * size, "place_slanted_edge");

    SceneGraph out = scene;
    const int target_idx = static_cast<int>(out.targets.size());
    out.targets.push_back({TargetSpec::Kind::SlantedEdge, center, size, angle_deg, 0.0});

    const WavelengthGrid grid =
        out.materials.empty() ? default_grid() : out.materials[0].reflectance.grid;
    const std::string prefix = "edge" + std::to_string(target_idx) + "_";
    out.materials.push_back(
        {prefix + "white",
         SpectralDistribution::constant(grid, 0.9, SpectralUnit::Reflectance), target_idx});
    out.materials.push_back(
        {prefix + "black",
         SpectralDistribution::constant(grid, 0.05, SpectralUnit::Reflectance), target_idx});
    const int bright = static_cast<int>(out.materials.size()) - 2;
    const int dark = bright + 1;

    // Square facing -z, split by an edge angle_deg from vertical. The edge
    // crosses the top and bottom sides for angles below 45 degrees.
    const double h = 0.5 * size;
    const double z = center.z;
    const double t = std::tan(angle_deg * constants::pi / 180.0);
    const double x_top = center.x + h * t;     // edge x at the top side
    const double x_bot = center.x - h * t;     // edge x at the bottom side
    const double xl = center.x - h, xr = center.x + h;
    const double yb = center.y - h, yt = center.y + h;
    const Quad left(Vec3{xl, yb, z}, Vec3{x_bot, yb, z}, Vec3{x_top, yt, z}, Vec3{xl, yt, z});
    const Quad right(Vec3{x_bot, yb, z}, Vec3{xr, yb, z}, Vec3{xr, yt, z}, Vec3{x_top, yt, z});
    out.primitives.push_back({left, bright, target_idx, prefix + "bright"});
    out.primitives.push_back({right, dark, target_idx, prefix + "dark"});
    out.validate();
    return out;
}

}  // namespace camsim
