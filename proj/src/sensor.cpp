// SPDX-License-Identifier: Apache-2.0
#include "camsim/sensor.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "camsim/rng.hpp"
#include "camsim/spectral_data.hpp"

namespace camsim {

namespace {
using Json = nlohmann::ordered_json;

bool valid_cfa(const std::string& p) {
    if (p.size() != 4) return false;
    for (char c : p)
        if (c != 'R' && c != 'G' && c != 'B') return false;
    return true;
}
}  // namespace

int cfa_channel(const std::string& pattern, int x, int y) {
    const char c = pattern[(y & 1) * 2 + (x & 1)];
    return c == 'R' ? 0 : (c == 'G' ? 1 : 2);
}

int DigitalImage::channel_at(int x, int y) const { return cfa_channel(cfa, x, y); }

SensorConfig SensorConfig::imx363() {
    SensorConfig cfg;
    const auto qe = transformed_qe(default_grid());
    cfg.qe_r = qe[0];
    cfg.qe_g = qe[1];
    cfg.qe_b = qe[2];
    cfg.validate();
    return cfg;
}

void SensorConfig::validate() const {
    check(pixel_size_um[0] > 0.0 && pixel_size_um[1] > 0.0, "sensor: pixel size must be positive");
    check(fill_factor > 0.0 && fill_factor <= 1.0, "sensor: fill factor must lie in (0, 1]");
    check(well_capacity_e > 0.0, "sensor: well capacity must be positive");
    check(voltage_swing_v > 0.0, "sensor: voltage swing must be positive");
    check(conversion_gain_v_per_e > 0.0, "sensor: conversion gain must be positive");
    check(analog_gain > 0.0, "sensor: analog gain must be positive");
    check(bits >= 8 && bits <= 16, "sensor: quantization depth must lie in [8, 16]");
    check(dsnu_mv >= 0.0 && prnu_pct >= 0.0 && read_noise_mv >= 0.0 &&
              dark_voltage_mv_per_s >= 0.0,
          "sensor: noise parameters must be non-negative");
    check(exposure_time_s > 0.0, "sensor: exposure time must be positive");
    check(valid_cfa(cfa), "sensor: CFA pattern must be four of R/G/B");
    check(qe_r.unit == SpectralUnit::QuantumEfficiency &&
              qe_g.unit == SpectralUnit::QuantumEfficiency &&
              qe_b.unit == SpectralUnit::QuantumEfficiency,
          "sensor: QE curves must carry the quantum-efficiency unit");
    // Electrical consistency: a full well must not exceed the ADC swing.
    check(well_capacity_e * conversion_gain_v_per_e <= voltage_swing_v * (1.0 + 1e-3),
          "sensor: well capacity times conversion gain exceeds the voltage swing");
}

double mean_electrons(const SpectralDistribution& irradiance, const SpectralDistribution& qe,
                      const SensorConfig& config) {
    check(irradiance.unit == SpectralUnit::Irradiance,
          "mean_electrons: irradiance unit tag required");
    check(irradiance.grid == qe.grid, "mean_electrons: wavelength grids must match");
    const double area_m2 = config.pixel_size_um[0] * config.pixel_size_um[1] * 1e-12;
    const double scale = area_m2 * config.fill_factor * config.exposure_time_s *
                         irradiance.grid.step_nm /
                         (constants::planck_h * constants::speed_of_light);
    double sum = 0.0;
    for (int i = 0; i < irradiance.count(); ++i) {
        const double lambda_m = irradiance.grid.wavelength(i) * 1e-9;
        sum += irradiance[i] * qe[i] * lambda_m;
    }
    return sum * scale;
}

FixedPatternMaps make_fixed_patterns(const SensorConfig& config, int width, int height) {
    config.validate();
    FixedPatternMaps maps{ImageF(width, height), ImageF(width, height)};
    const double dsnu_v = config.dsnu_mv * 1e-3;
    const double prnu = config.prnu_pct * 1e-2;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            Rng rng(config.pattern_seed, static_cast<uint64_t>(y) * width + x, 0);
            maps.offset_v.at(x, y) = dsnu_v * rng.normal();
            maps.gain.at(x, y) = 1.0 + prnu * rng.normal();
        }
    }
    return maps;
}

namespace {

DigitalImage expose_impl(const IrradianceCube& cube, const SensorConfig& config,
                         const FixedPatternMaps& patterns, uint32_t frame, bool parallel) {
    config.validate();
    check(cube.unit == SpectralUnit::Irradiance, "expose: irradiance cube required");
    check(patterns.offset_v.width == cube.width && patterns.offset_v.height == cube.height,
          "expose: fixed-pattern maps do not match the cube dimensions");

    const int w = cube.width, h = cube.height;
    DigitalImage img(w, h, config.bits, config.cfa);

    // Per-channel spectral weights: DN chain works on n = dot(E_pixel, weight).
    const double area_m2 = config.pixel_size_um[0] * config.pixel_size_um[1] * 1e-12;
    const double scale = area_m2 * config.fill_factor * config.exposure_time_s *
                         cube.grid.step_nm / (constants::planck_h * constants::speed_of_light);
    std::array<std::vector<double>, 3> weight;
    for (int c = 0; c < 3; ++c) {
        const SpectralDistribution qe = resample(config.qe_for_channel(c), cube.grid);
        weight[c].resize(cube.grid.count);
        for (int b = 0; b < cube.grid.count; ++b)
            weight[c][b] = qe[b] * cube.grid.wavelength(b) * 1e-9 * scale;
    }

    const double dark_v = config.dark_voltage_mv_per_s * 1e-3 * config.exposure_time_s;
    const double read_v = config.read_noise_mv * 1e-3;
    const double offset_v = config.analog_offset_mv * 1e-3;
    const double max_dn = static_cast<double>(img.max_dn());
    const int bands = cube.grid.count;
    const size_t plane_stride = static_cast<size_t>(w) * h;

#pragma omp parallel for schedule(static) if (parallel)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int c = cfa_channel(config.cfa, x, y);
            const double* e = cube.values.data() + static_cast<size_t>(y) * w + x;
            double mean = 0.0;
            for (int b = 0; b < bands; ++b) mean += e[b * plane_stride] * weight[c][b];

            Rng rng(config.noise_seed, static_cast<uint64_t>(y) * w + x, frame);
            double n = config.shot_noise ? static_cast<double>(rng.poisson(mean)) : mean;
            n = std::min(n, config.well_capacity_e);
            double v = n * config.conversion_gain_v_per_e * patterns.gain.at(x, y) + dark_v +
                       patterns.offset_v.at(x, y) + read_v * rng.normal();
            v = std::clamp(v * config.analog_gain + offset_v, 0.0, config.voltage_swing_v);
            img.at(x, y) =
                static_cast<uint16_t>(std::lround(v / config.voltage_swing_v * max_dn));
        }
    }
    return img;
}

}  // namespace

DigitalImage expose(const IrradianceCube& cube, const SensorConfig& config,
                    const FixedPatternMaps& patterns, uint32_t frame) {
    return expose_impl(cube, config, patterns, frame, true);
}

DigitalImage expose_serial(const IrradianceCube& cube, const SensorConfig& config,
                           const FixedPatternMaps& patterns, uint32_t frame) {
    return expose_impl(cube, config, patterns, frame, false);
}

std::vector<DigitalImage> expose_stack(const IrradianceCube& cube, const SensorConfig& config,
                                       const FixedPatternMaps& patterns, int count) {
    check(count >= 1, "expose_stack: count must be >= 1");
    std::vector<DigitalImage> frames;
    frames.reserve(count);
    for (int i = 0; i < count; ++i)
        frames.push_back(expose(cube, config, patterns, static_cast<uint32_t>(i)));
    return frames;
}

namespace {

Json spectrum_json(const SpectralDistribution& s) {
    Json j;
    j["start_nm"] = s.grid.start_nm;
    j["step_nm"] = s.grid.step_nm;
    j["values"] = s.values;
    return j;
}

SpectralDistribution spectrum_from_json(const Json& j) {
    const auto& vals = j.at("values");
    std::vector<double> v(vals.begin(), vals.end());
    const int count = static_cast<int>(v.size());
    return SpectralDistribution(
        WavelengthGrid(j.at("start_nm").get<double>(), j.at("step_nm").get<double>(), count),
        std::move(v), SpectralUnit::QuantumEfficiency);
}

}  // namespace

std::string SensorConfig::to_json() const {
    Json j;
    j["pixel_size_um"] = pixel_size_um;
    j["fill_factor"] = fill_factor;
    j["well_capacity_e"] = well_capacity_e;
    j["voltage_swing_v"] = voltage_swing_v;
    j["conversion_gain_v_per_e"] = conversion_gain_v_per_e;
    j["analog_gain"] = analog_gain;
    j["analog_offset_mv"] = analog_offset_mv;
    j["quantization_bits"] = bits;
    j["dsnu_mv"] = dsnu_mv;
    j["prnu_pct"] = prnu_pct;
    j["dark_voltage_mv_per_s"] = dark_voltage_mv_per_s;
    j["read_noise_mv"] = read_noise_mv;
    j["shot_noise"] = shot_noise;
    j["exposure_time_s"] = exposure_time_s;
    j["cfa"] = cfa;
    j["pattern_seed"] = pattern_seed;
    j["noise_seed"] = noise_seed;
    j["qe"] = Json{{"r", spectrum_json(qe_r)}, {"g", spectrum_json(qe_g)},
                   {"b", spectrum_json(qe_b)}};
    return j.dump(2) + "\n";
}

SensorConfig SensorConfig::from_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(std::string("sensor config: invalid JSON: ") + e.what());
    }
    SensorConfig cfg = SensorConfig::imx363();
    try {
        if (j.contains("pixel_size_um")) cfg.pixel_size_um = j["pixel_size_um"];
        if (j.contains("fill_factor")) cfg.fill_factor = j["fill_factor"];
        if (j.contains("well_capacity_e")) cfg.well_capacity_e = j["well_capacity_e"];
        if (j.contains("voltage_swing_v")) cfg.voltage_swing_v = j["voltage_swing_v"];
        if (j.contains("conversion_gain_v_per_e"))
            cfg.conversion_gain_v_per_e = j["conversion_gain_v_per_e"];
        if (j.contains("analog_gain")) cfg.analog_gain = j["analog_gain"];
        if (j.contains("analog_offset_mv")) cfg.analog_offset_mv = j["analog_offset_mv"];
        if (j.contains("quantization_bits")) cfg.bits = j["quantization_bits"];
        if (j.contains("dsnu_mv")) cfg.dsnu_mv = j["dsnu_mv"];
        if (j.contains("prnu_pct")) cfg.prnu_pct = j["prnu_pct"];
        if (j.contains("dark_voltage_mv_per_s"))
            cfg.dark_voltage_mv_per_s = j["dark_voltage_mv_per_s"];
        if (j.contains("read_noise_mv")) cfg.read_noise_mv = j["read_noise_mv"];
        if (j.contains("shot_noise")) cfg.shot_noise = j["shot_noise"];
        if (j.contains("exposure_time_s")) cfg.exposure_time_s = j["exposure_time_s"];
        if (j.contains("cfa")) cfg.cfa = j["cfa"];
        if (j.contains("pattern_seed")) cfg.pattern_seed = j["pattern_seed"];
        if (j.contains("noise_seed")) cfg.noise_seed = j["noise_seed"];
        if (j.contains("qe")) {
            const Json& q = j["qe"];
            if (q.is_string()) {
                const auto grid = default_grid();
                const auto triple = q.get<std::string>() == "published" ? published_qe(grid)
                                                                        : transformed_qe(grid);
                cfg.qe_r = triple[0];
                cfg.qe_g = triple[1];
                cfg.qe_b = triple[2];
            } else {
                cfg.qe_r = spectrum_from_json(q.at("r"));
                cfg.qe_g = spectrum_from_json(q.at("g"));
                cfg.qe_b = spectrum_from_json(q.at("b"));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("sensor config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

}  // namespace camsim
