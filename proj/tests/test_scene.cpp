// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "camsim/scene.hpp"
#include "camsim/spectral_data.hpp"

using namespace camsim;

TEST_CASE("default cornell box structure") {
    const SceneGraph scene = build_cornell_box();
    CHECK(scene.lights.size() == 1);
    CHECK(scene.targets.empty());
    // 8 wall quads + two blocks of 6 faces.
    CHECK(scene.primitives.size() == 8 + 12);
    CHECK_NOTHROW(scene.validate());

    // Left wall is red (long-wavelength reflectance dominates), right is green.
    const int left = scene.material_index("red");
    const int right = scene.material_index("green");
    REQUIRE(left >= 0);
    REQUIRE(right >= 0);
    const auto& red = scene.materials[left].reflectance;
    const auto& green = scene.materials[right].reflectance;
    const WavelengthGrid g = red.grid;
    double red_long = 0, red_short = 0, green_mid = 0, green_long = 0;
    for (int i = 0; i < g.count; ++i) {
        const double lam = g.wavelength(i);
        if (lam >= 620) red_long += red[i], green_long += green[i];
        if (lam <= 500) red_short += red[i];
        if (lam >= 520 && lam <= 560) green_mid += green[i];
    }
    CHECK(red_long > 4 * red_short);
    CHECK(green_mid > green_long);

    // The named red/green walls sit at x=0 / x=box respectively.
    for (const auto& prim : scene.primitives) {
        if (prim.name == "left_wall")
            for (const auto& v : prim.quad.p) CHECK(v.x == 0.0);
        if (prim.name == "right_wall")
            for (const auto& v : prim.quad.p) CHECK(v.x == doctest::Approx(0.55));
    }
}

TEST_CASE("light hole stays inside the ceiling and inherits its bounds") {
    CornellBoxParams params;
    params.hole_center_x = 0.5;
    params.hole_width = 0.2;
    CHECK_THROWS_WITH_AS(build_cornell_box(params), doctest::Contains("outside the ceiling"),
                         Error);

    CornellBoxParams degenerate;
    degenerate.hole_width = 0.0;
    CHECK_THROWS_WITH_AS(build_cornell_box(degenerate), doctest::Contains("positive area"),
                         Error);

    const SceneGraph scene = build_cornell_box();
    const Quad& lq = scene.lights[0].quad;
    for (const auto& v : lq.p) {
        CHECK(v.x >= 0.0);
        CHECK(v.x <= 0.55);
        CHECK(v.z >= 0.0);
        CHECK(v.z <= 0.55);
        CHECK(v.y <= 0.55);
    }
}

TEST_CASE("block taller than the box is rejected") {
    CornellBoxParams params;
    params.blocks[1].size.y = 0.7;
    params.blocks[1].center.y = 0.35;
    CHECK_THROWS_WITH_AS(build_cornell_box(params), doctest::Contains("does not fit"), Error);
}

TEST_CASE("mcc placement") {
    const SceneGraph base = build_cornell_box();
    const Vec3 back{0.275, 0.25, 0.548};
    const SceneGraph with_chart = place_mcc(base, back, 0.28);
    CHECK(with_chart.targets.size() == 1);
    int patches = 0;
    for (const auto& prim : with_chart.primitives)
        if (prim.from_target == 0 && prim.name.find("patch") != std::string::npos) ++patches;
    CHECK(patches == 24);

    // Three placements along the back wall (left/center/right).
    CHECK_NOTHROW(place_mcc(base, {0.14, 0.25, 0.548}, 0.26));
    CHECK_NOTHROW(place_mcc(base, {0.41, 0.25, 0.548}, 0.26));

    CHECK_THROWS_AS(place_mcc(base, back, 0.0), Error);
    CHECK_THROWS_WITH_AS(place_mcc(base, {0.9, 0.25, 0.548}, 0.28),
                         doctest::Contains("does not fit"), Error);
}

TEST_CASE("slanted edge placement") {
    const SceneGraph base = build_cornell_box();
    const Vec3 center{0.275, 0.3, 0.5};
    const SceneGraph with_edge = place_slanted_edge(base, center, 0.06, 5.0);
    CHECK(with_edge.targets.size() == 1);
    CHECK(with_edge.targets[0].angle_deg == 5.0);

    CHECK_THROWS_WITH_AS(place_slanted_edge(base, center, 0.06, 0.0), doctest::Contains("angle"),
                         Error);
    CHECK_THROWS_AS(place_slanted_edge(base, center, 0.06, 45.0), Error);
    CHECK_THROWS_AS(place_slanted_edge(base, center, 0.06, -3.0), Error);
}

TEST_CASE("serialize/parse round trip is structural identity") {
    SceneGraph scene = build_cornell_box();
    scene = place_mcc(scene, {0.14, 0.25, 0.548}, 0.26, 0.02);
    scene = place_slanted_edge(scene, {0.4, 0.3, 0.5}, 0.06, 7.5);
    const std::string text = serialize_scene(scene);
    const SceneGraph back = parse_scene(text);
    CHECK(back == scene);
    // And the round trip is a fixed point.
    CHECK(serialize_scene(back) == text);
}

TEST_CASE("parse rejections") {
    CHECK_THROWS_WITH_AS(parse_scene("{}"), doctest::Contains("camera required"), Error);
    CHECK_THROWS_AS(parse_scene("not json"), Error);

    const std::string cam = R"("camera": {
        "position": [0, 0, -1], "look_at": [0, 0, 0],
        "focal_length_mm": 4.0, "sensor_width_mm": 4.0, "sensor_height_mm": 3.0,
        "resolution": [16, 12]})";

    CHECK_THROWS_WITH_AS(
        parse_scene("{" + cam + R"(, "materials": {"m": {"start_nm": 400, "step_nm": 10,
            "values": [0.5, 1.3]}}, "lights": [], "primitives": []})"),
        doctest::Contains("reflectance out of range"), Error);

    CHECK_THROWS_WITH_AS(parse_scene("{" + cam + R"(, "unexpected": 1})"),
                         doctest::Contains("unknown key"), Error);

    // A document without lights fails scene validation.
    CHECK_THROWS_WITH_AS(parse_scene("{" + cam + "}"), doctest::Contains("light"), Error);
}

TEST_CASE("box primitive expands to six quads on parse") {
    const std::string text = R"({
      "camera": {"position": [0.5, 0.5, -1], "look_at": [0.5, 0.5, 0.5],
                 "focal_length_mm": 4.0, "sensor_width_mm": 4.0, "sensor_height_mm": 3.0,
                 "resolution": [16, 12]},
      "materials": {"white": {"start_nm": 400, "step_nm": 100, "values": [0.7, 0.7, 0.7, 0.7]}},
      "primitives": [{"type": "box", "material": "white", "center": [0.5, 0.25, 0.5],
                      "size": [0.2, 0.5, 0.2], "rotate_y_deg": 15, "name": "blk"}],
      "lights": [{"quad": [[0.4, 0.99, 0.4], [0.6, 0.99, 0.4], [0.6, 0.99, 0.6], [0.4, 0.99, 0.6]],
                  "spd": {"start_nm": 400, "step_nm": 100, "values": [1, 1, 1, 1]},
                  "name": "top"}]
    })";
    const SceneGraph scene = parse_scene(text);
    CHECK(scene.primitives.size() == 6);
    CHECK(scene.lights.size() == 1);
    CHECK_NOTHROW(scene.validate());
}

TEST_CASE("generated scenes expose box walls watertight to validation") {
    const SceneGraph scene = build_cornell_box();
    // Wall corners cover the full cube extents.
    Vec3 lo{1e9, 1e9, 1e9}, hi{-1e9, -1e9, -1e9};
    for (const auto& prim : scene.primitives)
        for (const auto& v : prim.quad.p) {
            lo.x = std::min(lo.x, v.x); lo.y = std::min(lo.y, v.y); lo.z = std::min(lo.z, v.z);
            hi.x = std::max(hi.x, v.x); hi.y = std::max(hi.y, v.y); hi.z = std::max(hi.z, v.z);
        }
    CHECK(lo.x == 0.0);
    CHECK(lo.y == 0.0);
    CHECK(hi.x == doctest::Approx(0.55));
    CHECK(hi.y == doctest::Approx(0.55));
    CHECK(hi.z == doctest::Approx(0.55));
}
