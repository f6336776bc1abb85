// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "camsim/raster.hpp"

namespace camsim {

/// Raw mosaicked digital values straight off the simulated sensor.
struct DigitalImage {
    int width = 0;
    int height = 0;
    int bits = 12;
    std::string cfa = "RGGB";
    std::vector<uint16_t> dn;

    DigitalImage() = default;
    DigitalImage(int w, int h, int b, std::string pattern)
        : width(w), height(h), bits(b), cfa(std::move(pattern)),
          dn(static_cast<size_t>(w) * h, 0) {}

    uint16_t at(int x, int y) const { return dn[static_cast<size_t>(y) * width + x]; }
    uint16_t& at(int x, int y) { return dn[static_cast<size_t>(y) * width + x]; }
    int max_dn() const { return (1 << bits) - 1; }
    /// 0 = R, 1 = G, 2 = B at the given site.
    int channel_at(int x, int y) const;
};

int cfa_channel(const std::string& pattern, int x, int y);

/// Full pixel signal chain configuration (electrical defaults mirror the
/// Sony IMX363 specification table).
struct SensorConfig {
    std::array<double, 2> pixel_size_um{1.4, 1.4};
    double fill_factor = 1.0;
    double well_capacity_e = 6000.0;
    double voltage_swing_v = 0.4591;
    double conversion_gain_v_per_e = 7.65e-5;
    double analog_gain = 1.0;
    double analog_offset_mv = 0.0;
    int bits = 12;
    double dsnu_mv = 0.64;
    double prnu_pct = 0.7;
    double dark_voltage_mv_per_s = 0.0;
    double read_noise_mv = 5.0;
    bool shot_noise = true;  // replace Poisson by its mean when false
    double exposure_time_s = 1.0 / 30.0;
    std::string cfa = "RGGB";
    SpectralDistribution qe_r, qe_g, qe_b;
    uint64_t pattern_seed = 1;
    uint64_t noise_seed = 2;

    /// Table defaults with the transformed QE triple (the simulation default).
    static SensorConfig imx363();

    void validate() const;
    /// DN produced per photoelectron through gain, swing and quantization.
    double dn_per_electron() const {
        return conversion_gain_v_per_e * analog_gain * ((1 << bits) - 1) / voltage_swing_v;
    }
    double dn_per_volt() const { return analog_gain * ((1 << bits) - 1) / voltage_swing_v; }
    const SpectralDistribution& qe_for_channel(int c) const {
        return c == 0 ? qe_r : (c == 1 ? qe_g : qe_b);
    }

    std::string to_json() const;
    static SensorConfig from_json(const std::string& text);
};

/// Per-pixel fixed-pattern noise, a deterministic function of pattern_seed.
struct FixedPatternMaps {
    ImageF offset_v;  // DSNU, volts
    ImageF gain;      // PRNU, near 1
};

/// Expected photoelectron count for one pixel's irradiance spectrum:
/// A * fill * t * sum E(l) QE(l) l/(hc) dl.
double mean_electrons(const SpectralDistribution& irradiance, const SpectralDistribution& qe,
                      const SensorConfig& config);

FixedPatternMaps make_fixed_patterns(const SensorConfig& config, int width, int height);

/// One exposure: Poisson shot noise, well clip, PRNU/DSNU, dark signal, read
/// noise, analog gain/offset, swing clip, quantization — in that order.
/// `frame` indexes the temporal noise stream.
DigitalImage expose(const IrradianceCube& cube, const SensorConfig& config,
                    const FixedPatternMaps& patterns, uint32_t frame = 0);
DigitalImage expose_serial(const IrradianceCube& cube, const SensorConfig& config,
                           const FixedPatternMaps& patterns, uint32_t frame = 0);

/// Repeated exposures with independent temporal noise over shared patterns.
std::vector<DigitalImage> expose_stack(const IrradianceCube& cube, const SensorConfig& config,
                                       const FixedPatternMaps& patterns, int count);

}  // namespace camsim
