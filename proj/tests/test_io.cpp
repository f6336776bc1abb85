// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "camsim/image_io.hpp"
#include "camsim/rng.hpp"

using namespace camsim;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("camsim_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("spectral raster round trip") {
    TempDir tmp;
    SpectralCube cube(20, 14, WavelengthGrid(400, 10, 5), SpectralUnit::Irradiance);
    Rng rng(1, 0, 0);
    for (auto& v : cube.values) v = rng.uniform() * 10.0;
    const std::string path = tmp.file("cube.sraster");
    write_spectral_raster(path, cube);

    const SpectralCube back = read_spectral_raster(path);
    CHECK(back.width == cube.width);
    CHECK(back.height == cube.height);
    CHECK(back.grid == cube.grid);
    CHECK(back.unit == cube.unit);
    REQUIRE(back.values.size() == cube.values.size());
    for (size_t i = 0; i < cube.values.size(); ++i)
        CHECK(back.values[i] == doctest::Approx(cube.values[i]).epsilon(1e-7));

    // Header is the documented five-line text block.
    std::ifstream in(path, std::ios::binary);
    std::string line;
    std::getline(in, line);
    CHECK(line == "SPECTRAL-RASTER v1");
    std::getline(in, line);
    CHECK(line == "width 20");
    std::getline(in, line);
    CHECK(line == "height 14");
    std::getline(in, line);
    CHECK(line == "grid 400 10 5");
    std::getline(in, line);
    CHECK(line == "unit irradiance");

    std::ofstream bad(tmp.file("bad.sraster"));
    bad << "NOT A RASTER\n";
    bad.close();
    CHECK_THROWS_AS(read_spectral_raster(tmp.file("bad.sraster")), Error);
}

TEST_CASE("pgm16 round trip with CFA comment") {
    TempDir tmp;
    DigitalImage img(10, 6, 12, "GRBG");
    Rng rng(2, 0, 0);
    for (auto& v : img.dn) v = static_cast<uint16_t>(rng.next_u32() & 0xFFF);
    const std::string path = tmp.file("raw.pgm");
    write_pgm16(path, img);

    const DigitalImage back = read_pgm16(path);
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.bits == 12);
    CHECK(back.cfa == "GRBG");
    CHECK(back.dn == img.dn);

    // Payload is big-endian: byte 0 of the first sample is the high byte.
    std::ifstream in(path, std::ios::binary);
    std::string line;
    std::getline(in, line);  // P5
    std::getline(in, line);
    CHECK(line == "# cfa=GRBG bits=12");
    std::getline(in, line);  // dims
    std::getline(in, line);
    CHECK(line == "4095");
    unsigned char bytes[2];
    in.read(reinterpret_cast<char*>(bytes), 2);
    CHECK(((bytes[0] << 8) | bytes[1]) == img.dn[0]);
}

TEST_CASE("csv and svg writers emit well-formed artifacts") {
    TempDir tmp;
    MtfCurve curve;
    for (int i = 0; i <= 10; ++i) {
        curve.frequency.push_back(i * 0.05);
        curve.modulation.push_back(1.0 - 0.08 * i);
    }
    write_mtf_csv(tmp.file("mtf.csv"), curve);
    std::ifstream in(tmp.file("mtf.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "frequency,modulation");
    std::getline(in, line);
    CHECK(line == "0,1");

    write_svg_plot(tmp.file("mtf.svg"), "mtf", "cycles/pixel", "modulation",
                   {{"measured", curve.frequency, curve.modulation, false},
                    {"points", {0.1, 0.2}, {0.9, 0.8}, true}});
    std::ifstream svg(tmp.file("mtf.svg"));
    std::string all((std::istreambuf_iterator<char>(svg)), std::istreambuf_iterator<char>());
    CHECK(all.find("<svg") != std::string::npos);
    CHECK(all.find("polyline") != std::string::npos);
    CHECK(all.find("circle") != std::string::npos);
    CHECK(all.find("</svg>") != std::string::npos);
}

TEST_CASE("mtf curve unit conversion") {
    MtfCurve c;
    c.frequency = {0.0, 0.5};
    c.modulation = {1.0, 0.6};
    const MtfCurve mm = c.in_cycles_per_mm(1.4);
    CHECK(mm.frequency[1] == doctest::Approx(0.5 * 1000.0 / 1.4));
    CHECK(mm.modulation == c.modulation);
}
