// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "camsim/sensor.hpp"
#include "camsim/spectral_data.hpp"

using namespace camsim;

namespace {

/// Flat irradiance cube on a single band at 550 nm.
IrradianceCube flat_cube(int w, int h, double value) {
    IrradianceCube cube(w, h, WavelengthGrid(550, 10, 1), SpectralUnit::Irradiance);
    for (auto& v : cube.values) v = value;
    return cube;
}

/// Config with a single-band unity QE triple (every channel identical).
SensorConfig mono_config() {
    SensorConfig cfg = SensorConfig::imx363();
    const WavelengthGrid g(550, 10, 1);
    const auto one = SpectralDistribution::constant(g, 1.0, SpectralUnit::QuantumEfficiency);
    cfg.qe_r = cfg.qe_g = cfg.qe_b = one;
    return cfg;
}

SensorConfig noiseless(SensorConfig cfg) {
    cfg.dsnu_mv = 0.0;
    cfg.prnu_pct = 0.0;
    cfg.read_noise_mv = 0.0;
    return cfg;
}

double mean_dn(const DigitalImage& img) {
    double s = 0;
    for (uint16_t v : img.dn) s += v;
    return s / static_cast<double>(img.dn.size());
}

}  // namespace

TEST_CASE("table defaults are electrically consistent") {
    const SensorConfig cfg = SensorConfig::imx363();
    CHECK(std::abs(cfg.well_capacity_e * cfg.conversion_gain_v_per_e - cfg.voltage_swing_v) <=
          1e-3 * cfg.voltage_swing_v);
    SensorConfig bad = cfg;
    bad.conversion_gain_v_per_e = 9e-5;  // 6000 * 9e-5 = 0.54 > 0.4591
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("exceeds the voltage swing"), Error);
}

TEST_CASE("mean electrons hand oracle") {
    SensorConfig cfg = mono_config();
    cfg.exposure_time_s = 0.01;
    const WavelengthGrid g(550, 10, 1);
    const SpectralDistribution e(g, {1.0}, SpectralUnit::Irradiance);
    const SpectralDistribution qe =
        SpectralDistribution::constant(g, 1.0, SpectralUnit::QuantumEfficiency);

    // 1 W/m^2/nm over 10 nm on a 1.4 um pixel for 10 ms at 550 nm:
    // 1*10*(1.4e-6)^2*0.01 J / (hc/550nm) = 5.4268e5 photoelectrons.
    const double n = mean_electrons(e, qe, cfg);
    CHECK(n == doctest::Approx(5.4268e5).epsilon(1e-3));

    // Zero irradiance and exposure linearity.
    const SpectralDistribution zero(g, {0.0}, SpectralUnit::Irradiance);
    CHECK(mean_electrons(zero, qe, cfg) == 0.0);
    cfg.exposure_time_s = 0.02;
    CHECK(mean_electrons(e, qe, cfg) == doctest::Approx(2.0 * n).epsilon(1e-12));

    const SpectralDistribution other =
        SpectralDistribution::constant(WavelengthGrid(400, 10, 31), 1.0,
                                       SpectralUnit::QuantumEfficiency);
    CHECK_THROWS_AS(mean_electrons(e, other, cfg), Error);
    CHECK_THROWS_AS(mean_electrons(qe, qe, cfg), Error);  // wrong unit tag
}

TEST_CASE("fixed patterns: zero sigma, statistics, determinism") {
    SensorConfig cfg = mono_config();
    cfg.dsnu_mv = 0.0;
    cfg.prnu_pct = 0.0;
    const FixedPatternMaps none = make_fixed_patterns(cfg, 32, 32);
    for (double v : none.offset_v.data) CHECK(v == 0.0);
    for (double v : none.gain.data) CHECK(v == 1.0);

    cfg = mono_config();  // DSNU 0.64 mV, PRNU 0.7%
    const FixedPatternMaps maps = make_fixed_patterns(cfg, 1024, 1024);
    double sum = 0, sum2 = 0;
    for (double v : maps.offset_v.data) {
        sum += v;
        sum2 += v * v;
    }
    const double n = static_cast<double>(maps.offset_v.data.size());
    const double std_mv = std::sqrt(sum2 / n - (sum / n) * (sum / n)) * 1000.0;
    CHECK(std_mv == doctest::Approx(0.64).epsilon(0.01));

    double gsum = 0, gsum2 = 0;
    for (double v : maps.gain.data) {
        gsum += v;
        gsum2 += v * v;
    }
    const double gstd = std::sqrt(gsum2 / n - (gsum / n) * (gsum / n));
    CHECK(gstd == doctest::Approx(0.007).epsilon(0.02));

    const FixedPatternMaps again = make_fixed_patterns(cfg, 1024, 1024);
    CHECK(again.offset_v.data == maps.offset_v.data);
    CHECK(again.gain.data == maps.gain.data);

    cfg.pattern_seed = 77;
    const FixedPatternMaps other = make_fixed_patterns(cfg, 1024, 1024);
    CHECK(other.offset_v.data != maps.offset_v.data);
}

TEST_CASE("expose endpoints: dark zero and full-swing code") {
    const SensorConfig cfg = noiseless(mono_config());
    const FixedPatternMaps maps = make_fixed_patterns(cfg, 16, 16);

    const DigitalImage dark = expose(flat_cube(16, 16, 0.0), cfg, maps);
    for (uint16_t v : dark.dn) CHECK(v == 0);
    CHECK(dark.bits == 12);
    CHECK(dark.max_dn() == 4095);

    // Saturating irradiance: well clip then swing quantization -> 4095 would
    // need the full swing; a full well lands at well*cg/swing of the range.
    const DigitalImage hot = expose(flat_cube(16, 16, 1e4), cfg, maps);
    const int full_well_dn =
        static_cast<int>(std::lround(cfg.well_capacity_e * cfg.conversion_gain_v_per_e /
                                     cfg.voltage_swing_v * 4095.0));
    for (uint16_t v : hot.dn) CHECK(v == full_well_dn);

    // Drive the voltage above the swing with analog gain: clips to 4095.
    SensorConfig gained = cfg;
    gained.analog_gain = 4.0;
    const DigitalImage clipped = expose(flat_cube(16, 16, 1e4), gained, maps);
    for (uint16_t v : clipped.dn) CHECK(v == 4095);

    CHECK_THROWS_AS(expose(flat_cube(8, 8, 0.0), cfg, maps), Error);
}

TEST_CASE("expose is deterministic and matches the serial reference") {
    SensorConfig cfg = mono_config();
    const IrradianceCube cube = flat_cube(64, 48, 2e-3);
    const FixedPatternMaps maps = make_fixed_patterns(cfg, 64, 48);
    const DigitalImage a = expose(cube, cfg, maps, 3);
    const DigitalImage b = expose_serial(cube, cfg, maps, 3);
    const DigitalImage c = expose(cube, cfg, maps, 3);
    CHECK(a.dn == b.dn);
    CHECK(a.dn == c.dn);
    const DigitalImage d = expose(cube, cfg, maps, 4);
    CHECK(a.dn != d.dn);
    cfg.noise_seed = 1234;
    const DigitalImage e = expose(cube, cfg, maps, 3);
    CHECK(a.dn != e.dn);
}

TEST_CASE("mean DN is linear in exposure until near saturation") {
    SensorConfig cfg = noiseless(mono_config());
    const FixedPatternMaps maps = make_fixed_patterns(cfg, 64, 64);
    // Level chosen so the longest exposure stays ~5% below full well.
    const double level = 1.1e-3;
    std::vector<double> ts, dns;
    for (double t = 0.002; t <= 0.014; t += 0.002) {
        cfg.exposure_time_s = t;
        const DigitalImage img = expose(flat_cube(64, 64, level), cfg, maps, 1);
        ts.push_back(t);
        dns.push_back(mean_dn(img));
    }
    // R^2 of the linear fit must exceed 0.999.
    const int n = static_cast<int>(ts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sx += ts[i];
        sy += dns[i];
        sxx += ts[i] * ts[i];
        sxy += ts[i] * dns[i];
        syy += dns[i] * dns[i];
    }
    const double r = (n * sxy - sx * sy) /
                     std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    CHECK(r * r > 0.999);
    // And the top of the series is clearly below saturation.
    CHECK(dns.back() < 0.95 * 2794.0);
}

TEST_CASE("photon transfer slope recovers the conversion gain in DN/e-") {
    SensorConfig cfg = noiseless(mono_config());
    cfg.analog_offset_mv = 20.0;  // keep the toe off zero
    const int w = 160, h = 160;
    const FixedPatternMaps maps = make_fixed_patterns(cfg, w, h);

    std::vector<double> means, vars;
    for (double level = 2e-4; level <= 2.2e-3; level += 4e-4) {
        const DigitalImage img = expose(flat_cube(w, h, level), cfg, maps, 9);
        double s = 0, s2 = 0;
        for (uint16_t v : img.dn) {
            s += v;
            s2 += static_cast<double>(v) * v;
        }
        const double n = static_cast<double>(img.dn.size());
        means.push_back(s / n);
        vars.push_back((s2 - s * s / n) / (n - 1));
    }
    const int n = static_cast<int>(means.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += means[i];
        sy += vars[i];
        sxx += means[i] * means[i];
        sxy += means[i] * vars[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(cfg.dn_per_electron()).epsilon(0.05));
}

TEST_CASE("expose_stack separates temporal and fixed-pattern noise") {
    SensorConfig cfg = mono_config();
    cfg.analog_offset_mv = 200.0;  // pedestal keeps the dark Gaussian unclipped
    const int w = 96, h = 96, frames = 60;
    const FixedPatternMaps maps = make_fixed_patterns(cfg, w, h);
    const IrradianceCube dark = flat_cube(w, h, 0.0);

    const auto stack = expose_stack(dark, cfg, maps, frames);
    CHECK(static_cast<int>(stack.size()) == frames);

    // Per-pixel temporal std vs read noise in DN.
    const double read_dn = cfg.read_noise_mv * 1e-3 * cfg.dn_per_volt();
    double tvar_sum = 0.0;
    std::vector<double> mean_frame(static_cast<size_t>(w) * h, 0.0);
    for (const auto& f : stack)
        for (size_t i = 0; i < f.dn.size(); ++i) mean_frame[i] += f.dn[i];
    for (auto& m : mean_frame) m /= frames;
    for (size_t i = 0; i < mean_frame.size(); ++i) {
        double v = 0;
        for (const auto& f : stack) {
            const double d = f.dn[i] - mean_frame[i];
            v += d * d;
        }
        tvar_sum += v / (frames - 1);
    }
    const double temporal_std = std::sqrt(tvar_sum / static_cast<double>(mean_frame.size()));
    CHECK(temporal_std == doctest::Approx(read_dn).epsilon(0.03));

    // Spatial std of the stack mean, with the residual temporal term removed,
    // recovers the DSNU.
    const double dsnu_dn = cfg.dsnu_mv * 1e-3 * cfg.dn_per_volt();
    double ms = 0, ms2 = 0;
    for (double m : mean_frame) {
        ms += m;
        ms2 += m * m;
    }
    const double np = static_cast<double>(mean_frame.size());
    const double spatial_var = ms2 / np - (ms / np) * (ms / np);
    const double est_dsnu = std::sqrt(spatial_var - temporal_std * temporal_std / frames);
    CHECK(est_dsnu == doctest::Approx(dsnu_dn).epsilon(0.05));

    // count=1 equals a single expose with frame index 0.
    const auto one = expose_stack(dark, cfg, maps, 1);
    const DigitalImage single = expose(dark, cfg, maps, 0);
    CHECK(one[0].dn == single.dn);
    CHECK_THROWS_AS(expose_stack(dark, cfg, maps, 0), Error);
}

TEST_CASE("expected DN is monotone in irradiance") {
    SensorConfig cfg = mono_config();
    const int w = 64, h = 64;
    const FixedPatternMaps maps = make_fixed_patterns(cfg, w, h);
    double prev = -1.0;
    for (double level : {0.0, 1e-4, 5e-4, 1e-3, 3e-3, 1e-2}) {
        const double m = mean_dn(expose(flat_cube(w, h, level), cfg, maps, 2));
        CHECK(m >= prev);
        prev = m;
    }
}

TEST_CASE("cfa channel addressing") {
    CHECK(cfa_channel("RGGB", 0, 0) == 0);
    CHECK(cfa_channel("RGGB", 1, 0) == 1);
    CHECK(cfa_channel("RGGB", 0, 1) == 1);
    CHECK(cfa_channel("RGGB", 1, 1) == 2);
    CHECK(cfa_channel("BGGR", 0, 0) == 2);
    CHECK(cfa_channel("BGGR", 3, 3) == 0);
    SensorConfig cfg = mono_config();
    cfg.cfa = "XGGB";
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("sensor config JSON round trip") {
    SensorConfig cfg = SensorConfig::imx363();
    cfg.exposure_time_s = 0.025;
    cfg.noise_seed = 99;
    const std::string text = cfg.to_json();
    const SensorConfig back = SensorConfig::from_json(text);
    CHECK(back.exposure_time_s == cfg.exposure_time_s);
    CHECK(back.noise_seed == cfg.noise_seed);
    CHECK(back.qe_g.values == cfg.qe_g.values);
    CHECK(back.well_capacity_e == cfg.well_capacity_e);

    CHECK_THROWS_AS(SensorConfig::from_json("nope"), Error);
    const SensorConfig published = SensorConfig::from_json(R"({"qe": "published"})");
    CHECK(published.qe_r.values == published_qe(default_grid())[0].values);
}
