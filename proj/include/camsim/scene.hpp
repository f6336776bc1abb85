// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "camsim/geometry.hpp"
#include "camsim/radiometry.hpp"

namespace camsim {

struct MatteMaterial {
    std::string name;
    SpectralDistribution reflectance;  // unit Reflectance, values in [0,1]
    int from_target = -1;              // set when a target expansion added it

    bool operator==(const MatteMaterial& o) const {
        return name == o.name && reflectance.grid == o.reflectance.grid &&
               reflectance.values == o.reflectance.values && from_target == o.from_target;
    }
};

struct PinholeCamera {
    Vec3 position;
    Vec3 look_at;
    Vec3 up{0.0, 1.0, 0.0};
    double focal_length_mm = 4.38;
    double sensor_width_mm = 5.6;
    double sensor_height_mm = 4.2;
    int res_x = 320;
    int res_y = 240;

    void validate() const;
    double pixel_pitch_um() const { return sensor_width_mm * 1000.0 / res_x; }
    bool operator==(const PinholeCamera& o) const;
};

/// Matte geometry. Boxes in scene files are expanded to six quads on load.
struct Primitive {
    Quad quad;
    int material = -1;
    int from_target = -1;
    std::string name;

    bool operator==(const Primitive& o) const {
        return quad.p == o.quad.p && material == o.material && from_target == o.from_target &&
               name == o.name;
    }
};

struct AreaLight {
    Quad quad;                 // parallelogram
    SpectralDistribution spd;  // emitted radiance, W sr^-1 m^-2 nm^-1
    bool two_sided = false;
    std::string material;      // optional surface reflectance (emissive walls)
    std::string name;

    void validate() const;
    bool operator==(const AreaLight& o) const {
        return quad.p == o.quad.p && spd.grid == o.spd.grid && spd.values == o.spd.values &&
               two_sided == o.two_sided && material == o.material && name == o.name;
    }
};

struct TargetSpec {
    enum class Kind { Mcc, SlantedEdge };
    Kind kind = Kind::Mcc;
    Vec3 center;
    double size = 0.0;                 // chart width / edge-target side, meters
    double angle_deg = 5.0;            // slanted edge only
    double margin_reflectance = 0.0;   // MCC only

    bool operator==(const TargetSpec& o) const {
        return kind == o.kind && center == o.center && size == o.size &&
               angle_deg == o.angle_deg && margin_reflectance == o.margin_reflectance;
    }
};

struct SceneGraph {
    std::vector<MatteMaterial> materials;
    std::vector<Primitive> primitives;
    std::vector<AreaLight> lights;
    PinholeCamera camera;
    std::vector<TargetSpec> targets;

    /// Throws on structural violations: no lights, dangling material
    /// references, degenerate or non-planar quads, invalid camera.
    void validate() const;

    int material_index(const std::string& name) const;  // -1 if absent
    bool operator==(const SceneGraph& o) const;
};

struct BlockSpec {
    Vec3 center;
    Vec3 size;
    double rotate_y_deg = 0.0;
    std::string name;
};

struct CornellBoxParams {
    double box_size = 0.55;  // interior cube edge, meters
    std::vector<BlockSpec> blocks;
    // Ceiling hole covered by the area light, centered in x/z.
    double hole_center_x = 0.275;
    double hole_center_z = 0.275;
    double hole_width = 0.13;   // x extent
    double hole_depth = 0.105;  // z extent
    WavelengthGrid grid = default_grid();
    double light_scale = 1.0;   // multiplies the bundled source SPD
    PinholeCamera camera;

    CornellBoxParams();  // fills classic block/camera defaults
};

/// Five-walled box open toward the camera: red left wall, green right wall,
/// white floor/ceiling/back and blocks, ceiling hole covered by the light.
SceneGraph build_cornell_box(const CornellBoxParams& params = CornellBoxParams());

/// Adds a 24-patch chart (4 rows x 6 columns, gray series on the bottom row)
/// facing the camera. `size` is the chart width; height is 2/3 of it.
SceneGraph place_mcc(const SceneGraph& scene, const Vec3& center, double size,
                     double margin_reflectance = 0.0);

/// Adds a square test target split by a straight edge `angle_deg` from
/// vertical into near-white and near-black matte halves.
SceneGraph place_slanted_edge(const SceneGraph& scene, const Vec3& center, double size,
                              double angle_deg = 5.0);

/// Strict JSON scene document (see README for the schema). Unknown keys are
/// rejected; parse(serialize(s)) is structurally equal to s.
SceneGraph parse_scene(const std::string& text);
std::string serialize_scene(const SceneGraph& scene);

SceneGraph load_scene_file(const std::string& path);
void save_scene_file(const SceneGraph& scene, const std::string& path);

/// Six outward-facing quads of a y-rotated box (helper for scene files and
/// the Cornell blocks).
std::vector<Quad> make_box_quads(const Vec3& center, const Vec3& size, double rotate_y_deg);

}  // namespace camsim
