// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks of the camsim binary: subcommand wiring, manifest
// execution, artifact formats, exit codes. Invoked with the binary path as
// argv[1].
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "camsim/image_io.hpp"
#include "camsim/scene.hpp"

namespace fs = std::filesystem;
using namespace camsim;

namespace {

std::string g_binary;
fs::path g_dir;

int run_cli(const std::string& args) {
    const std::string cmd = g_binary + " " + args + " >> " + (g_dir / "cli.log").string() +
                            " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("scene subcommand writes parseable fixtures") {
    const auto mcc_path = (g_dir / "scene_mcc.json").string();
    CHECK(run_cli("scene --mcc left --out " + mcc_path) == 0);
    const SceneGraph mcc = load_scene_file(mcc_path);
    CHECK(mcc.targets.size() == 1);
    CHECK(mcc.targets[0].kind == TargetSpec::Kind::Mcc);

    const auto edge_path = (g_dir / "scene_edge.json").string();
    CHECK(run_cli("scene --slanted-edge --distance 0.5 --out " + edge_path) == 0);
    const SceneGraph edge = load_scene_file(edge_path);
    CHECK(edge.targets.size() == 1);
    CHECK(edge.targets[0].kind == TargetSpec::Kind::SlantedEdge);
    CHECK(edge.camera.res_x == 256);

    // Missing required --out is a usage error with exit code 2.
    CHECK(run_cli("scene --mcc left") == 2);
    // Bad placement value fails cleanly.
    CHECK(run_cli("scene --mcc sideways --out " + (g_dir / "x.json").string()) == 1);
}

TEST_CASE("run executes a small manifest and is deterministic across threads") {
    const auto scene_path = (g_dir / "box.json").string();
    REQUIRE(run_cli("scene --out " + scene_path) == 0);

    const std::string manifest = R"({
      "scene": ")" + scene_path + R"(",
      "stages": ["render", "optics", "sensor", "analysis"],
      "render": {"samples_per_pixel": 4, "max_depth": 3, "seed": 11,
                 "grid": {"start_nm": 500, "step_nm": 50, "count": 3}},
      "optics": {"delta_psf": true},
      "luminance_cd_m2": 21.5
    })";
    write_text(g_dir / "manifest.json", manifest);

    const auto out1 = (g_dir / "run1").string();
    const auto out2 = (g_dir / "run2").string();
    REQUIRE(run_cli("--threads 1 run --manifest " + (g_dir / "manifest.json").string() +
                    " --out " + out1) == 0);
    REQUIRE(run_cli("--threads 2 run --manifest " + (g_dir / "manifest.json").string() +
                    " --out " + out2) == 0);

    for (const char* name : {"radiance.sraster", "irradiance.sraster", "raw.pgm",
                             "provenance.json", "scene.json", "preview.ppm", "stats.csv"}) {
        CAPTURE(name);
        std::ifstream a(fs::path(out1) / name, std::ios::binary);
        std::ifstream b(fs::path(out2) / name, std::ios::binary);
        REQUIRE(a.good());
        REQUIRE(b.good());
        const std::string da((std::istreambuf_iterator<char>(a)),
                             std::istreambuf_iterator<char>());
        const std::string db((std::istreambuf_iterator<char>(b)),
                             std::istreambuf_iterator<char>());
        CHECK(da == db);
    }

    // The radiance artifact honors the luminance target.
    const SpectralCube radiance = read_spectral_raster((fs::path(out1) / "radiance.sraster").string());
    CHECK(radiance.unit == SpectralUnit::Radiance);
    const DigitalImage raw = read_pgm16((fs::path(out1) / "raw.pgm").string());
    CHECK(raw.width == radiance.width);
    CHECK(raw.bits == 12);

    // Invalid stage lists are rejected.
    write_text(g_dir / "bad.json", R"({"scene": ")" + scene_path +
                                       R"(", "stages": ["optics", "render"]})");
    CHECK(run_cli("run --manifest " + (g_dir / "bad.json").string() + " --out " +
                  (g_dir / "bad_out").string()) == 1);
}

TEST_CASE("analyze qe-fit recovers a synthetic matrix through the CLI") {
    std::string pred = "r,g,b\n";
    std::string meas = "r,g,b\n";
    // measured = predicted * M0 with M0 = [[0.5,0,0],[0.1,0.7,0],[0,0.3,0.9]].
    unsigned state = 12345;
    auto next = [&] {
        state = state * 1103515245u + 12345u;
        return 100.0 + static_cast<double>(state % 2000u);
    };
    for (int i = 0; i < 72; ++i) {
        const double r = next(), g = next(), b = next();
        pred += std::to_string(r) + "," + std::to_string(g) + "," + std::to_string(b) + "\n";
        const double rm = 0.5 * r + 0.1 * g;
        const double gm = 0.7 * g + 0.3 * b;
        const double bm = 0.9 * b;
        meas += std::to_string(rm) + "," + std::to_string(gm) + "," + std::to_string(bm) + "\n";
    }
    write_text(g_dir / "pred.csv", pred);
    write_text(g_dir / "meas.csv", meas);
    const auto matrix_path = (g_dir / "m.json").string();
    REQUIRE(run_cli("analyze qe-fit --predicted " + (g_dir / "pred.csv").string() +
                    " --measured " + (g_dir / "meas.csv").string() + " --matrix " + matrix_path +
                    " --scatter " + (g_dir / "scatter.csv").string()) == 0);
    std::ifstream mf(matrix_path);
    std::string mtext((std::istreambuf_iterator<char>(mf)), std::istreambuf_iterator<char>());
    const QeTransform t = QeTransform::from_json(mtext);
    CHECK(t.m[0][0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(t.m[1][0] == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(t.m[2][2] == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("analyze profile and noise run over a raw artifact") {
    const auto raw_path = (g_dir / "run1/raw.pgm").string();
    REQUIRE(fs::exists(raw_path));
    CHECK(run_cli("analyze profile " + raw_path + " --row 100 --cols 10:200 --csv " +
                  (g_dir / "profile.csv").string() + " --svg " +
                  (g_dir / "profile.svg").string()) == 0);
    std::ifstream pf(g_dir / "profile.csv");
    std::string header;
    std::getline(pf, header);
    CHECK(header == "column,r,g,b");

    CHECK(run_cli("analyze noise " + raw_path + " " + raw_path +
                  " --regions '10,10,24,24;60,60,24,24' --csv " +
                  (g_dir / "noise.csv").string()) == 0);
    std::ifstream nf(g_dir / "noise.csv");
    std::getline(nf, header);
    CHECK(header == "region,channel,mean,stddev,count");

    CHECK(run_cli("analyze profile " + raw_path + " --row 100000 --csv " +
                  (g_dir / "bad.csv").string()) == 1);
}

TEST_CASE("config print-defaults emits the sensor table") {
    const int code = std::system((g_binary + " config print-defaults > " +
                                  (g_dir / "defaults.json").string() + " 2>&1")
                                     .c_str());
    CHECK(WEXITSTATUS(code) == 0);
    std::ifstream in(g_dir / "defaults.json");
    const std::string text((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    CHECK(text.find("\"well_capacity_e\": 6000.0") != std::string::npos);
    CHECK(text.find("\"voltage_swing_v\": 0.4591") != std::string::npos);
    CHECK(text.find("\"read_noise_mv\": 5.0") != std::string::npos);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <camsim-binary>\n");
        return 1;
    }
    g_binary = argv[1];
    g_dir = fs::temp_directory_path() / "camsim_cli_test";
    fs::remove_all(g_dir);
    fs::create_directories(g_dir);

    doctest::Context ctx;
    const int rc = ctx.run();
    fs::remove_all(g_dir);
    return rc;
}
