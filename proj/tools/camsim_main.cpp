// SPDX-License-Identifier: Apache-2.0
//
// camsim: end-to-end camera simulation pipeline driver.
//   scene    build Cornell-box scene files (targets optional)
//   run      execute a pipeline manifest (render -> optics -> sensor)
//   analyze  mtf / qe-fit / profile / noise on pipeline artifacts
//   config   print default configurations

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <omp.h>

#include "camsim/analysis.hpp"
#include "camsim/image_io.hpp"
#include "camsim/optics.hpp"
#include "camsim/render.hpp"
#include "camsim/scene.hpp"
#include "camsim/sensor.hpp"
#include "camsim/spectral_data.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using namespace camsim;

namespace {

constexpr const char* kVersion = "0.1.0";

uint64_t fnv1a64(const std::string& text) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    check(static_cast<bool>(in), "cannot open " + path);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

fs::path default_out_dir() {
    if (const char* env = std::getenv("CAMSIM_OUT_DIR")) return fs::path(env);
    return fs::path(".");
}

/// Writes through a .partial name so an interrupted stage leaves its debris
/// clearly marked instead of a plausible-looking artifact.
class ArtifactWriter {
public:
    explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {
        fs::create_directories(dir_);
    }
    template <typename Fn>
    fs::path write(const std::string& name, Fn&& fn) const {
        const fs::path final_path = dir_ / name;
        const fs::path partial = dir_ / (name + ".partial");
        fn(partial.string());
        fs::rename(partial, final_path);
        return final_path;
    }
    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
};

// ---------------------------------------------------------------------------
// Manifest

struct Manifest {
    std::string scene_path;
    std::vector<std::string> stages{"render", "optics", "sensor"};
    RenderConfig render;
    OpticsConfig optics;
    int oversample = 1;
    SensorConfig sensor = SensorConfig::imx363();
    double luminance_target = -1.0;  // <0 = no scaling
    std::string out_dir;
    std::string raw_text;  // original JSON, hashed into provenance
};

RenderConfig render_from_json(const Json& j) {
    RenderConfig cfg;
    if (j.contains("samples_per_pixel")) cfg.samples_per_pixel = j["samples_per_pixel"];
    if (j.contains("max_depth")) cfg.max_depth = j["max_depth"];
    if (j.contains("russian_roulette_start_depth"))
        cfg.russian_roulette_start_depth = j["russian_roulette_start_depth"];
    if (j.contains("seed")) cfg.seed = j["seed"];
    if (j.contains("grid")) {
        const Json& g = j["grid"];
        cfg.grid = WavelengthGrid(g.at("start_nm").get<double>(), g.at("step_nm").get<double>(),
                                  g.at("count").get<int>());
    }
    return cfg;
}

OpticsConfig optics_from_json(const Json& j, int* oversample) {
    OpticsConfig cfg;
    if (j.contains("focal_length_mm")) cfg.focal_length_mm = j["focal_length_mm"];
    if (j.contains("f_number")) cfg.f_number = j["f_number"];
    if (j.contains("pupil_grid_size")) cfg.pupil_grid_size = j["pupil_grid_size"];
    if (j.contains("pad_factor")) cfg.pad_factor = j["pad_factor"];
    if (j.contains("delta_psf")) cfg.delta_psf = j["delta_psf"];
    if (j.contains("rel_illum")) cfg.rel_illum = j["rel_illum"].get<std::vector<double>>();
    if (j.contains("zernike_um"))
        for (const auto& item : j["zernike_um"].items())
            cfg.zernike_um[std::stoi(item.key())] = item.value().get<double>();
    if (j.contains("oversample")) *oversample = j["oversample"];
    cfg.validate();
    return cfg;
}

Json render_to_json(const RenderConfig& cfg) {
    Json j;
    j["samples_per_pixel"] = cfg.samples_per_pixel;
    j["max_depth"] = cfg.max_depth;
    j["russian_roulette_start_depth"] = cfg.russian_roulette_start_depth;
    j["seed"] = cfg.seed;
    j["grid"] = {{"start_nm", cfg.grid.start_nm},
                 {"step_nm", cfg.grid.step_nm},
                 {"count", cfg.grid.count}};
    return j;
}

Json optics_to_json(const OpticsConfig& cfg, int oversample) {
    Json j;
    j["focal_length_mm"] = cfg.focal_length_mm;
    j["f_number"] = cfg.f_number;
    Json z = Json::object();
    for (const auto& [idx, c] : cfg.zernike_um) z[std::to_string(idx)] = c;
    j["zernike_um"] = std::move(z);
    j["rel_illum"] = cfg.rel_illum;
    j["pupil_grid_size"] = cfg.pupil_grid_size;
    j["pad_factor"] = cfg.pad_factor;
    j["delta_psf"] = cfg.delta_psf;
    j["oversample"] = oversample;
    return j;
}

Manifest parse_manifest(const std::string& path) {
    Manifest m;
    m.raw_text = read_file(path);
    Json j;
    try {
        j = Json::parse(m.raw_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(std::string("manifest: invalid JSON: ") + e.what());
    }
    check(j.contains("scene"), "manifest: scene path required");
    m.scene_path = j["scene"].get<std::string>();
    if (j.contains("stages")) m.stages = j["stages"].get<std::vector<std::string>>();
    if (j.contains("render")) m.render = render_from_json(j["render"]);
    if (j.contains("optics")) m.optics = optics_from_json(j["optics"], &m.oversample);
    if (j.contains("sensor")) m.sensor = SensorConfig::from_json(j["sensor"].dump());
    if (j.contains("luminance_cd_m2")) m.luminance_target = j["luminance_cd_m2"];
    if (j.contains("out_dir")) m.out_dir = j["out_dir"].get<std::string>();

    // Stage list must be a prefix of the pipeline chain ("scene" implied).
    const std::vector<std::string> chain{"scene", "render", "optics", "sensor", "analysis"};
    size_t pos = m.stages.empty() || m.stages.front() != "scene" ? 1 : 0;
    for (const auto& stage : m.stages) {
        check(pos < chain.size() && stage == chain[pos],
              "manifest: stages must form a prefix of scene->render->optics->sensor->analysis");
        ++pos;
    }
    check(m.oversample >= 1, "manifest: oversample must be >= 1");
    return m;
}

bool has_stage(const Manifest& m, const std::string& name) {
    for (const auto& s : m.stages)
        if (s == name) return true;
    return false;
}

int cmd_run(const std::string& manifest_path, const std::string& out_override, long seed_override,
            double luminance_override) {
    Manifest m = parse_manifest(manifest_path);
    if (seed_override >= 0) m.render.seed = static_cast<uint64_t>(seed_override);
    if (luminance_override >= 0.0) m.luminance_target = luminance_override;

    fs::path out = !out_override.empty() ? fs::path(out_override)
                   : !m.out_dir.empty() ? fs::path(m.out_dir)
                                        : default_out_dir();
    const ArtifactWriter artifacts(out);

    SceneGraph scene = load_scene_file(m.scene_path);
    artifacts.write("scene.json",
                    [&](const std::string& p) { save_scene_file(scene, p); });

    Json prov;
    prov["tool"] = "camsim";
    prov["version"] = kVersion;
    prov["manifest_hash"] = hex64(fnv1a64(m.raw_text));
    prov["scene"] = m.scene_path;
    prov["stages"] = m.stages;
    prov["render"] = render_to_json(m.render);
    prov["optics"] = optics_to_json(m.optics, m.oversample);
    prov["sensor_pattern_seed"] = m.sensor.pattern_seed;
    prov["sensor_noise_seed"] = m.sensor.noise_seed;
    if (m.luminance_target >= 0.0) prov["luminance_cd_m2"] = m.luminance_target;

    if (has_stage(m, "render")) {
        SceneGraph render_scene = scene;
        render_scene.camera.res_x *= m.oversample;
        render_scene.camera.res_y *= m.oversample;
        RadianceCube cube = render(render_scene, m.render);
        if (m.luminance_target >= 0.0) cube = scale_to_luminance(cube, m.luminance_target);
        artifacts.write("radiance.sraster",
                        [&](const std::string& p) { write_spectral_raster(p, cube); });
        std::cout << "render: " << cube.width << "x" << cube.height << "x" << cube.grid.count
                  << " mean luminance " << mean_luminance(cube) << " cd/m^2\n";

        if (has_stage(m, "optics")) {
            const double fine_pitch = render_scene.camera.pixel_pitch_um();
            const IrradianceCube irr =
                radiance_to_irradiance(cube, m.optics, fine_pitch, m.oversample);
            artifacts.write("irradiance.sraster",
                            [&](const std::string& p) { write_spectral_raster(p, irr); });
            std::cout << "optics: " << irr.width << "x" << irr.height << " at "
                      << scene.camera.pixel_pitch_um() << " um pitch\n";

            if (has_stage(m, "sensor")) {
                const FixedPatternMaps patterns =
                    make_fixed_patterns(m.sensor, irr.width, irr.height);
                const DigitalImage raw = expose(irr, m.sensor, patterns);
                artifacts.write("raw.pgm",
                                [&](const std::string& p) { write_pgm16(p, raw); });
                std::cout << "sensor: raw " << raw.width << "x" << raw.height << " cfa "
                          << raw.cfa << " bits " << raw.bits << "\n";

                if (has_stage(m, "analysis")) {
                    const RgbImage rgb = demosaic_bilinear(raw);
                    artifacts.write("preview.ppm", [&](const std::string& p) {
                        write_ppm_preview(p, rgb, raw.max_dn());
                    });
                    const Roi center{raw.width / 4, raw.height / 4, raw.width / 2,
                                     raw.height / 2};
                    const RegionStats stats = region_stats(raw, center);
                    artifacts.write("stats.csv", [&](const std::string& p) {
                        write_region_stats_csv(p, {stats});
                    });
                    const auto prof = line_profile(rgb, raw.height / 2, 0, raw.width);
                    artifacts.write("profile.csv", [&](const std::string& p) {
                        write_profile_csv(p, prof, 0);
                    });
                    std::cout << "analysis: preview + stats written\n";
                }
            }
        }
    }

    artifacts.write("provenance.json", [&](const std::string& p) {
        std::ofstream f(p);
        f << prov.dump(2) << "\n";
    });
    std::cout << "artifacts in " << artifacts.dir().string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// scene subcommand

int cmd_scene(const std::string& out_path, const std::string& mcc, bool slanted_edge,
              double distance_m, double size_m, double angle_deg) {
    SceneGraph scene = build_cornell_box();
    if (!mcc.empty()) {
        double x = 0.275;
        if (mcc == "left")
            x = 0.14;
        else if (mcc == "right")
            x = 0.41;
        else
            check(mcc == "center", "scene: --mcc must be left, center or right");
        scene = place_mcc(scene, {x, 0.25, 0.548}, 0.26);
    }
    if (slanted_edge) {
        // Target deep in the box (under the ceiling light), camera pulled up
        // to the requested distance with a narrow-field native-pitch sensor.
        // The blocks are left out so they cannot shadow or occlude the chart.
        check(size_m > 0.0, "scene: --size must be positive");
        CornellBoxParams params;
        params.blocks.clear();
        scene = build_cornell_box(params);
        const Vec3 center{0.275, 0.275, 0.4};
        scene.camera.position = {center.x, center.y, center.z - distance_m};
        scene.camera.look_at = center;
        scene.camera.res_x = 256;
        scene.camera.res_y = 96;
        scene.camera.sensor_width_mm = 256 * 1.4e-3;
        scene.camera.sensor_height_mm = 96 * 1.4e-3;
        scene = place_slanted_edge(scene, center, size_m, angle_deg);
    }
    save_scene_file(scene, out_path);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// analyze subcommands

Roi parse_roi(const std::string& text) {
    Roi roi;
    if (std::sscanf(text.c_str(), "%d,%d,%d,%d", &roi.x, &roi.y, &roi.width, &roi.height) != 4)
        throw Error("expected ROI as x,y,w,h");
    return roi;
}

ImageF extract_channel(const DigitalImage& img, const std::string& channel, double* pitch_scale) {
    *pitch_scale = 1.0;
    if (channel == "all") {
        ImageF out(img.width, img.height);
        for (size_t i = 0; i < img.dn.size(); ++i) out.data[i] = img.dn[i];
        return out;
    }
    const int want = channel == "r" ? 0 : channel == "g" ? 1 : channel == "b" ? 2 : -1;
    check(want >= 0, "analyze: channel must be one of all, r, g, b");
    // One rectangular Bayer sub-plane (for G, the site sharing R's row).
    int ox = -1, oy = -1;
    for (int y = 0; y < 2 && ox < 0; ++y)
        for (int x = 0; x < 2; ++x)
            if (cfa_channel(img.cfa, x, y) == want) {
                ox = x;
                oy = y;
                break;
            }
    check(ox >= 0, "analyze: channel not present in CFA " + img.cfa);
    ImageF out(img.width / 2, img.height / 2);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            out.at(x, y) = img.at(2 * x + ox, 2 * y + oy);
    *pitch_scale = 2.0;
    return out;
}

int cmd_analyze_mtf(const std::string& input, const std::string& roi_text,
                    const std::string& channel, int oversample, double pitch_um,
                    const std::string& out_csv, const std::string& out_svg) {
    const DigitalImage raw = read_pgm16(input);
    double pitch_scale = 1.0;
    ImageF plane = extract_channel(raw, channel, &pitch_scale);
    if (!roi_text.empty()) {
        const Roi roi = parse_roi(roi_text);
        check(roi.x >= 0 && roi.y >= 0 && roi.width > 0 && roi.height > 0 &&
                  roi.x + roi.width <= plane.width && roi.y + roi.height <= plane.height,
              "analyze mtf: ROI out of bounds");
        ImageF sub(roi.width, roi.height);
        for (int y = 0; y < roi.height; ++y)
            for (int x = 0; x < roi.width; ++x) sub.at(x, y) = plane.at(roi.x + x, roi.y + y);
        plane = std::move(sub);
    }
    MtfCurve curve = slanted_edge_mtf(plane, oversample);
    if (pitch_um > 0.0) curve = curve.in_cycles_per_mm(pitch_um * pitch_scale);
    write_mtf_csv(out_csv, curve);
    if (!out_svg.empty())
        write_svg_plot(out_svg, "slanted-edge MTF",
                       pitch_um > 0.0 ? "cycles/mm" : "cycles/pixel", "modulation",
                       {{"mtf", curve.frequency, curve.modulation, false}});
    std::cout << "mtf: " << curve.frequency.size() << " samples, modulation[0]="
              << curve.modulation[0] << "\n";
    return 0;
}

std::vector<std::array<double, 3>> read_rgb_csv(const std::string& path) {
    std::ifstream in(path);
    check(static_cast<bool>(in), "cannot open " + path);
    std::string line;
    check(static_cast<bool>(std::getline(in, line)), path + ": empty file");
    check(line == "r,g,b", path + ": header must be 'r,g,b'");
    std::vector<std::array<double, 3>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<double, 3> row{};
        char c1 = 0, c2 = 0;
        std::istringstream ls(line);
        check(static_cast<bool>(ls >> row[0] >> c1 >> row[1] >> c2 >> row[2]) && c1 == ',' &&
                  c2 == ',',
              path + ": malformed row '" + line + "'");
        rows.push_back(row);
    }
    return rows;
}

int cmd_analyze_qe_fit(const std::string& predicted_path, const std::string& measured_path,
                       double zero_threshold, const std::string& out_json,
                       const std::string& scatter_csv) {
    const auto predicted = read_rgb_csv(predicted_path);
    const auto measured = read_rgb_csv(measured_path);
    double rms = 0.0;
    const QeTransform t = solve_qe_transform(predicted, measured, &rms, zero_threshold);
    std::ofstream out(out_json);
    check(static_cast<bool>(out), "cannot write " + out_json);
    out << t.to_json();
    std::cout << "M =\n";
    for (int r = 0; r < 3; ++r)
        std::cout << "  [" << t.m[r][0] << ", " << t.m[r][1] << ", " << t.m[r][2] << "]\n";
    std::cout << "residual rms = " << rms << "\n";
    if (!scatter_csv.empty()) {
        std::ofstream sc(scatter_csv);
        sc << "channel,predicted,fitted,measured\n";
        const char* names = "rgb";
        for (size_t i = 0; i < predicted.size(); ++i)
            for (int c = 0; c < 3; ++c) {
                double fit = 0.0;
                for (int r = 0; r < 3; ++r) fit += predicted[i][r] * t.m[r][c];
                sc << names[c] << "," << predicted[i][c] << "," << fit << "," << measured[i][c]
                   << "\n";
            }
    }
    return 0;
}

int cmd_analyze_profile(const std::string& input, int row, const std::string& cols,
                        double scale, const std::string& out_csv, const std::string& out_svg) {
    const DigitalImage raw = read_pgm16(input);
    const RgbImage rgb = demosaic_bilinear(raw);
    int c0 = 0, c1 = rgb.width;
    if (!cols.empty())
        check(std::sscanf(cols.c_str(), "%d:%d", &c0, &c1) == 2, "expected --cols a:b");
    auto prof = line_profile(rgb, row, c0, c1);
    for (auto& ch : prof)
        for (double& v : ch) v *= scale;
    write_profile_csv(out_csv, prof, c0);
    if (!out_svg.empty()) {
        std::vector<double> xs(prof[0].size());
        for (size_t i = 0; i < xs.size(); ++i) xs[i] = c0 + static_cast<double>(i);
        write_svg_plot(out_svg, "line profile row " + std::to_string(row), "column", "DN",
                       {{"r", xs, prof[0], false},
                        {"g", xs, prof[1], false},
                        {"b", xs, prof[2], false}});
    }
    std::cout << "profile: " << prof[0].size() << " columns\n";
    return 0;
}

int cmd_analyze_noise(const std::vector<std::string>& inputs, const std::string& regions_text,
                      const std::string& out_csv) {
    check(!inputs.empty(), "analyze noise: at least one raw image required");
    std::vector<Roi> rois;
    std::istringstream rs(regions_text);
    std::string tok;
    while (std::getline(rs, tok, ';'))
        if (!tok.empty()) rois.push_back(parse_roi(tok));
    check(!rois.empty(), "analyze noise: --regions required (x,y,w,h;...)");

    std::vector<std::vector<RegionStats>> all;
    for (const auto& path : inputs) {
        const DigitalImage raw = read_pgm16(path);
        std::vector<RegionStats> stats;
        for (const Roi& roi : rois) stats.push_back(region_stats(raw, roi));
        all.push_back(std::move(stats));
    }
    write_region_stats_csv(out_csv, all[0]);
    if (all.size() == 2) {
        double max_mean_gap = 0.0, max_std_gap = 0.0;
        for (size_t i = 0; i < rois.size(); ++i)
            for (int c = 0; c < 3; ++c) {
                max_mean_gap = std::max(max_mean_gap,
                                        std::abs(all[0][i].mean[c] - all[1][i].mean[c]));
                max_std_gap = std::max(max_std_gap,
                                       std::abs(all[0][i].stddev[c] - all[1][i].stddev[c]));
            }
        std::cout << "max mean gap = " << max_mean_gap << " DN\n";
        std::cout << "max std gap = " << max_std_gap << " DN\n";
    }
    std::cout << "noise stats for " << rois.size() << " regions written\n";
    return 0;
}

int cmd_analyze_otf(double lambda_nm, const std::string& zernike, const std::string& otf_csv,
                    const std::string& psf_csv, const std::string& out_svg) {
    OpticsConfig cfg;
    if (!zernike.empty()) {
        std::istringstream zs(zernike);
        std::string tok;
        while (std::getline(zs, tok, ',')) {
            int j = 0;
            double c = 0.0;
            check(std::sscanf(tok.c_str(), "%d=%lf", &j, &c) == 2,
                  "analyze otf: --zernike expects j=um[,j=um...]");
            cfg.zernike_um[j] = c;
        }
    }
    cfg.validate();
    const ComplexRaster tf = otf(cfg, lambda_nm);
    const double step = otf_freq_step_cyc_per_mm(cfg, lambda_nm);
    const double fc = diffraction_cutoff_cyc_per_mm(cfg, lambda_nm);
    MtfCurve curve;
    for (int i = 0; i <= 120; ++i) {
        const double f = fc * i / 100.0;  // out to 1.2x cutoff
        curve.frequency.push_back(f);
        curve.modulation.push_back(std::abs(otf_sample(tf, step, f, 0.0)));
    }
    write_mtf_csv(otf_csv, curve);
    if (!psf_csv.empty()) {
        const ImageF p = psf(cfg, lambda_nm);
        const double pitch = psf_sample_um(cfg, lambda_nm);
        std::ofstream out(psf_csv);
        check(static_cast<bool>(out), "cannot write " + psf_csv);
        out << "x_um,value\n";
        const int row = p.height / 2;
        for (int x = 0; x < p.width; ++x)
            out << (x - p.width / 2) * pitch << "," << p.at(x, row) << "\n";
    }
    if (!out_svg.empty())
        write_svg_plot(out_svg, "MTF at " + std::to_string(lambda_nm) + " nm", "cycles/mm",
                       "modulation", {{"otf", curve.frequency, curve.modulation, false}});
    std::cout << "otf: cutoff " << fc << " cycles/mm\n";
    return 0;
}

int cmd_config_print_defaults() {
    Json j;
    j["render"] = render_to_json(RenderConfig{});
    j["optics"] = optics_to_json(OpticsConfig{}, 1);
    j["sensor"] = Json::parse(SensorConfig::imx363().to_json());
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"camsim: spectral camera simulation pipeline"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    long seed = -1;
    std::string out_dir;
    int threads = 0;
    app.add_option("--seed", seed, "Override the render seed");
    app.add_option("--out", out_dir, "Output directory or file (per subcommand)");
    app.add_option("--threads", threads, "OpenMP thread count (0 = library default)");

    // scene
    auto* scene_cmd = app.add_subcommand("scene", "Write a Cornell-box scene file");
    scene_cmd->fallthrough();
    std::string mcc, scene_out;
    bool slanted = false;
    double distance = 0.5, size = 0.06, angle = 5.0;
    scene_cmd->add_option("--mcc", mcc, "Place the 24-patch chart: left|center|right");
    scene_cmd->add_flag("--slanted-edge", slanted, "Place a slanted-edge target");
    scene_cmd->add_option("--distance", distance, "Target distance from the camera (m)");
    scene_cmd->add_option("--size", size, "Target size (m)");
    scene_cmd->add_option("--angle", angle, "Edge angle from vertical (deg)");
    scene_cmd->add_option("--out", scene_out, "Output scene path")->required();

    // run
    auto* run_cmd = app.add_subcommand("run", "Execute a pipeline manifest");
    run_cmd->fallthrough();
    std::string manifest_path;
    double run_luminance = -1.0;
    run_cmd->add_option("--manifest", manifest_path, "Manifest JSON")->required();
    run_cmd->add_option("--luminance", run_luminance,
                        "Rescale rendered radiance to this mean luminance (cd/m^2)");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Analyses over pipeline artifacts");
    analyze->require_subcommand(1);
    analyze->fallthrough();

    auto* mtf_cmd = analyze->add_subcommand("mtf", "ISO 12233 slanted-edge MTF");
    mtf_cmd->fallthrough();
    std::string mtf_input, mtf_roi, mtf_channel = "all", mtf_csv, mtf_svg;
    int mtf_oversample = 4;
    double mtf_pitch = 0.0;
    mtf_cmd->add_option("input", mtf_input, "Raw PGM")->required();
    mtf_cmd->add_option("--roi", mtf_roi, "Edge region x,y,w,h");
    mtf_cmd->add_option("--channel", mtf_channel, "all|r|g|b (default all)");
    mtf_cmd->add_option("--oversample", mtf_oversample, "ESF oversampling factor");
    mtf_cmd->add_option("--pitch-um", mtf_pitch, "Report cycles/mm for this pixel pitch");
    mtf_cmd->add_option("--csv", mtf_csv, "Output CSV path")->required();
    mtf_cmd->add_option("--svg", mtf_svg, "Optional SVG plot path");

    auto* qe_cmd = analyze->add_subcommand("qe-fit", "Least-squares QE transform");
    qe_cmd->fallthrough();
    std::string qe_pred, qe_meas, qe_out, qe_scatter;
    double qe_threshold = 0.0;
    qe_cmd->add_option("--predicted", qe_pred, "Predicted means CSV (r,g,b)")->required();
    qe_cmd->add_option("--measured", qe_meas, "Measured means CSV (r,g,b)")->required();
    qe_cmd->add_option("--zero-threshold", qe_threshold,
                       "Zero entries below this and re-solve (0 = off)");
    qe_cmd->add_option("--matrix", qe_out, "Output matrix JSON")->required();
    qe_cmd->add_option("--scatter", qe_scatter, "Optional scatter CSV");

    auto* prof_cmd = analyze->add_subcommand("profile", "Per-channel line profile");
    prof_cmd->fallthrough();
    std::string prof_input, prof_cols, prof_csv, prof_svg;
    int prof_row = 0;
    double prof_scale = 1.0;
    prof_cmd->add_option("input", prof_input, "Raw PGM")->required();
    prof_cmd->add_option("--row", prof_row, "Row index")->required();
    prof_cmd->add_option("--cols", prof_cols, "Column range a:b");
    prof_cmd->add_option("--scale", prof_scale, "Scale factor applied to the values");
    prof_cmd->add_option("--csv", prof_csv, "Output CSV path")->required();
    prof_cmd->add_option("--svg", prof_svg, "Optional SVG plot path");

    auto* otf_cmd = analyze->add_subcommand("otf", "Wavefront PSF/OTF export");
    otf_cmd->fallthrough();
    double otf_lambda = 550.0;
    std::string otf_zernike, otf_csv, otf_psf_csv, otf_svg;
    otf_cmd->add_option("--lambda", otf_lambda, "Wavelength (nm)");
    otf_cmd->add_option("--zernike", otf_zernike, "ANSI terms j=um[,j=um...]");
    otf_cmd->add_option("--csv", otf_csv, "Output MTF CSV (cycles/mm)")->required();
    otf_cmd->add_option("--psf-csv", otf_psf_csv, "Optional PSF cross-section CSV");
    otf_cmd->add_option("--svg", otf_svg, "Optional SVG plot path");

    auto* noise_cmd = analyze->add_subcommand("noise", "Region mean/std statistics");
    noise_cmd->fallthrough();
    std::vector<std::string> noise_inputs;
    std::string noise_regions, noise_csv;
    noise_cmd->add_option("inputs", noise_inputs, "One or two raw PGMs")->required();
    noise_cmd->add_option("--regions", noise_regions, "Regions x,y,w,h;x,y,w,h;...")->required();
    noise_cmd->add_option("--csv", noise_csv, "Output CSV path")->required();

    // config
    auto* config_cmd = app.add_subcommand("config", "Configuration utilities");
    auto* print_cmd = config_cmd->add_subcommand("print-defaults", "Print default configs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit 2, --help/--version 0
    }

    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (*scene_cmd)
            return cmd_scene(scene_out, mcc, slanted, distance, size, angle);
        if (*run_cmd) return cmd_run(manifest_path, out_dir, seed, run_luminance);
        if (*mtf_cmd)
            return cmd_analyze_mtf(mtf_input, mtf_roi, mtf_channel, mtf_oversample, mtf_pitch,
                                   mtf_csv, mtf_svg);
        if (*qe_cmd)
            return cmd_analyze_qe_fit(qe_pred, qe_meas, qe_threshold, qe_out, qe_scatter);
        if (*prof_cmd)
            return cmd_analyze_profile(prof_input, prof_row, prof_cols, prof_scale, prof_csv,
                                       prof_svg);
        if (*otf_cmd)
            return cmd_analyze_otf(otf_lambda, otf_zernike, otf_csv, otf_psf_csv, otf_svg);
        if (*noise_cmd) return cmd_analyze_noise(noise_inputs, noise_regions, noise_csv);
        if (*print_cmd) return cmd_config_print_defaults();
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
