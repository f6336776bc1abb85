// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <set>

#include <json.hpp>

#include "camsim/scene.hpp"

namespace camsim {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw Error("scene: " + path + ": " + msg);
}

void reject_unknown(const Json& obj, const std::set<std::string>& known,
                    const std::string& path) {
    for (const auto& item : obj.items())
        if (!known.count(item.key())) fail(path, "unknown key '" + item.key() + "'");
}

const Json& require(const Json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string(key) + " required");
    return *it;
}

double number(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

Vec3 vec3(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) fail(path, "expected [x, y, z]");
    return {number(j[0], path), number(j[1], path), number(j[2], path)};
}

Json vec3_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

Quad quad(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 4) fail(path, "expected four [x, y, z] points");
    Quad q;
    for (int i = 0; i < 4; ++i) q.p[i] = vec3(j[i], path);
    return q;
}

Json quad_json(const Quad& q) {
    Json arr = Json::array();
    for (const Vec3& v : q.p) arr.push_back(vec3_json(v));
    return arr;
}

SpectralDistribution spectrum(const Json& j, SpectralUnit unit, const std::string& path) {
    if (!j.is_object()) fail(path, "expected a spectrum object");
    if (j.contains("csv")) {
        reject_unknown(j, {"csv"}, path);
        return read_spectrum_csv_file(j["csv"].get<std::string>(), unit);
    }
    reject_unknown(j, {"start_nm", "step_nm", "values"}, path);
    const double start = number(require(j, "start_nm", path), path);
    const double step = number(require(j, "step_nm", path), path);
    const Json& vals = require(j, "values", path);
    if (!vals.is_array() || vals.empty()) fail(path, "values must be a non-empty array");
    std::vector<double> v;
    v.reserve(vals.size());
    for (const auto& x : vals) v.push_back(number(x, path));
    const int count = static_cast<int>(v.size());
    try {
        return SpectralDistribution(WavelengthGrid(start, step, count), std::move(v), unit);
    } catch (const Error& e) {
        const std::string why = e.what();
        if (unit == SpectralUnit::Reflectance && why.find("out of [0,1]") != std::string::npos)
            fail(path, "reflectance out of range");
        fail(path, why);
    }
}

Json spectrum_json(const SpectralDistribution& s) {
    Json j;
    j["start_nm"] = s.grid.start_nm;
    j["step_nm"] = s.grid.step_nm;
    j["values"] = s.values;
    return j;
}

PinholeCamera camera_from_json(const Json& j) {
    const std::string path = "camera";
    reject_unknown(j,
                   {"position", "look_at", "up", "focal_length_mm", "sensor_width_mm",
                    "sensor_height_mm", "resolution"},
                   path);
    PinholeCamera cam;
    cam.position = vec3(require(j, "position", path), path + ".position");
    cam.look_at = vec3(require(j, "look_at", path), path + ".look_at");
    if (j.contains("up")) cam.up = vec3(j["up"], path + ".up");
    cam.focal_length_mm = number(require(j, "focal_length_mm", path), path);
    cam.sensor_width_mm = number(require(j, "sensor_width_mm", path), path);
    cam.sensor_height_mm = number(require(j, "sensor_height_mm", path), path);
    const Json& res = require(j, "resolution", path);
    if (!res.is_array() || res.size() != 2) fail(path + ".resolution", "expected [w, h]");
    cam.res_x = res[0].get<int>();
    cam.res_y = res[1].get<int>();
    return cam;
}

}  // namespace

SceneGraph parse_scene(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(std::string("scene: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error("scene: document must be a JSON object");
    reject_unknown(doc, {"camera", "materials", "lights", "primitives", "targets"}, "document");

    SceneGraph scene;
    scene.camera = camera_from_json(require(doc, "camera", "document"));

    if (doc.contains("materials")) {
        const Json& mats = doc["materials"];
        if (!mats.is_object()) fail("materials", "expected an object of name -> spectrum");
        for (const auto& item : mats.items()) {
            SpectralDistribution refl = spectrum(item.value(), SpectralUnit::Reflectance,
                                                 "materials." + item.key());
            scene.materials.push_back({item.key(), std::move(refl)});
        }
    }

    if (doc.contains("primitives")) {
        const Json& prims = doc["primitives"];
        if (!prims.is_array()) fail("primitives", "expected an array");
        int i = 0;
        for (const Json& pj : prims) {
            const std::string path = "primitives[" + std::to_string(i) + "]";
            reject_unknown(pj, {"type", "material", "points", "center", "size", "rotate_y_deg",
                                "name"},
                           path);
            const std::string type = require(pj, "type", path).get<std::string>();
            const std::string mat_name = require(pj, "material", path).get<std::string>();
            const int mat = scene.material_index(mat_name);
            if (mat < 0) fail(path, "unknown material '" + mat_name + "'");
            std::string name = pj.contains("name") ? pj["name"].get<std::string>()
                                                   : "prim" + std::to_string(i);
            if (type == "quad") {
                scene.primitives.push_back(
                    {quad(require(pj, "points", path), path + ".points"), mat, -1, name});
            } else if (type == "box") {
                const Vec3 center = vec3(require(pj, "center", path), path + ".center");
                const Vec3 size = vec3(require(pj, "size", path), path + ".size");
                const double rot =
                    pj.contains("rotate_y_deg") ? number(pj["rotate_y_deg"], path) : 0.0;
                int face = 0;
                for (const Quad& q : make_box_quads(center, size, rot))
                    scene.primitives.push_back(
                        {q, mat, -1, name + "_face" + std::to_string(face++)});
            } else {
                fail(path, "unknown primitive type '" + type + "'");
            }
            ++i;
        }
    }

    if (doc.contains("lights")) {
        const Json& lights = doc["lights"];
        if (!lights.is_array()) fail("lights", "expected an array");
        int i = 0;
        for (const Json& lj : lights) {
            const std::string path = "lights[" + std::to_string(i) + "]";
            reject_unknown(lj, {"quad", "spd", "two_sided", "material", "name"}, path);
            AreaLight light;
            light.quad = quad(require(lj, "quad", path), path + ".quad");
            light.spd = spectrum(require(lj, "spd", path), SpectralUnit::Radiance, path + ".spd");
            if (lj.contains("two_sided")) light.two_sided = lj["two_sided"].get<bool>();
            if (lj.contains("material")) light.material = lj["material"].get<std::string>();
            light.name = lj.contains("name") ? lj["name"].get<std::string>()
                                             : "light" + std::to_string(i);
            scene.lights.push_back(std::move(light));
            ++i;
        }
    }

    if (doc.contains("targets")) {
        const Json& targets = doc["targets"];
        if (!targets.is_array()) fail("targets", "expected an array");
        int i = 0;
        for (const Json& tj : targets) {
            const std::string path = "targets[" + std::to_string(i) + "]";
            reject_unknown(tj, {"type", "center", "size", "angle_deg", "margin_reflectance"},
                           path);
            const std::string type = require(tj, "type", path).get<std::string>();
            const Vec3 center = vec3(require(tj, "center", path), path + ".center");
            const double size = number(require(tj, "size", path), path + ".size");
            if (type == "mcc") {
                const double margin = tj.contains("margin_reflectance")
                                          ? number(tj["margin_reflectance"], path)
                                          : 0.0;
                scene = place_mcc(scene, center, size, margin);
            } else if (type == "slanted_edge") {
                const double angle =
                    tj.contains("angle_deg") ? number(tj["angle_deg"], path) : 5.0;
                scene = place_slanted_edge(scene, center, size, angle);
            } else {
                fail(path, "unknown target type '" + type + "'");
            }
            ++i;
        }
    }

    scene.validate();
    return scene;
}

std::string serialize_scene(const SceneGraph& scene) {
    Json doc;

    Json cam;
    cam["position"] = vec3_json(scene.camera.position);
    cam["look_at"] = vec3_json(scene.camera.look_at);
    cam["up"] = vec3_json(scene.camera.up);
    cam["focal_length_mm"] = scene.camera.focal_length_mm;
    cam["sensor_width_mm"] = scene.camera.sensor_width_mm;
    cam["sensor_height_mm"] = scene.camera.sensor_height_mm;
    cam["resolution"] = Json::array({scene.camera.res_x, scene.camera.res_y});
    doc["camera"] = std::move(cam);

    Json mats = Json::object();
    for (const auto& m : scene.materials)
        if (m.from_target < 0) mats[m.name] = spectrum_json(m.reflectance);
    doc["materials"] = std::move(mats);

    Json lights = Json::array();
    for (const auto& l : scene.lights) {
        Json lj;
        lj["quad"] = quad_json(l.quad);
        lj["spd"] = spectrum_json(l.spd);
        lj["two_sided"] = l.two_sided;
        if (!l.material.empty()) lj["material"] = l.material;
        lj["name"] = l.name;
        lights.push_back(std::move(lj));
    }
    doc["lights"] = std::move(lights);

    Json prims = Json::array();
    for (const auto& p : scene.primitives) {
        if (p.from_target >= 0) continue;  // re-expanded from `targets` on parse
        Json pj;
        pj["type"] = "quad";
        pj["material"] = scene.materials[p.material].name;
        pj["points"] = quad_json(p.quad);
        pj["name"] = p.name;
        prims.push_back(std::move(pj));
    }
    doc["primitives"] = std::move(prims);

    Json targets = Json::array();
    for (const auto& t : scene.targets) {
        Json tj;
        if (t.kind == TargetSpec::Kind::Mcc) {
            tj["type"] = "mcc";
            tj["center"] = vec3_json(t.center);
            tj["size"] = t.size;
            tj["margin_reflectance"] = t.margin_reflectance;
        } else {
            tj["type"] = "slanted_edge";
            tj["center"] = vec3_json(t.center);
            tj["size"] = t.size;
            tj["angle_deg"] = t.angle_deg;
        }
        targets.push_back(std::move(tj));
    }
    doc["targets"] = std::move(targets);

    return doc.dump(2) + "\n";
}

SceneGraph load_scene_file(const std::string& path) {
    std::ifstream in(path);
    check(static_cast<bool>(in), "scene: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_scene(text);
}

void save_scene_file(const SceneGraph& scene, const std::string& path) {
    std::ofstream out(path);
    check(static_cast<bool>(out), "scene: cannot write " + path);
    out << serialize_scene(scene);
}

}  // namespace camsim
