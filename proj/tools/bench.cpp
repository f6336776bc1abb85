// SPDX-License-Identifier: Apache-2.0
//
// Timing comparison of the OpenMP kernels against their serial references.
// Usage: camsim_bench [spp] — default 32.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

#include "camsim/analysis.hpp"
#include "camsim/optics.hpp"
#include "camsim/render.hpp"
#include "camsim/rng.hpp"
#include "camsim/scene.hpp"
#include "camsim/sensor.hpp"

using namespace camsim;

namespace {

template <typename Fn>
double time_it(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-28s serial %8.3f s   openmp %8.3f s   speedup %5.2fx   %s\n", name, serial_s,
                parallel_s, serial_s / parallel_s, identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const int spp = argc > 1 ? std::atoi(argv[1]) : 32;
    std::printf("threads: %d\n", omp_get_max_threads());

    // Path tracer.
    SceneGraph scene = build_cornell_box();
    scene.camera.res_x = 96;
    scene.camera.res_y = 72;
    RenderConfig rcfg;
    rcfg.samples_per_pixel = spp;
    rcfg.max_depth = 6;
    RadianceCube cube_s, cube_p;
    const double t_rs = time_it([&] { cube_s = render_serial(scene, rcfg); });
    const double t_rp = time_it([&] { cube_p = render(scene, rcfg); });
    report("render (96x72)", t_rs, t_rp, cube_s.values == cube_p.values);

    // Wavefront optics over the full default grid.
    OpticsConfig ocfg;
    ocfg.zernike_um[4] = 1.225;
    IrradianceCube irr_s, irr_p;
    const double t_os =
        time_it([&] { irr_s = radiance_to_irradiance_serial(cube_s, ocfg, 17.5); });
    const double t_op = time_it([&] { irr_p = radiance_to_irradiance(cube_s, ocfg, 17.5); });
    report("optics conv (31 bands)", t_os, t_op, irr_s.values == irr_p.values);

    // Sensor exposure.
    SensorConfig sensor = SensorConfig::imx363();
    IrradianceCube big(768, 576, irr_s.grid, SpectralUnit::Irradiance);
    for (size_t i = 0; i < big.values.size(); ++i) big.values[i] = irr_s.values[i % irr_s.values.size()];
    const FixedPatternMaps maps = make_fixed_patterns(sensor, big.width, big.height);
    DigitalImage raw_s, raw_p;
    const double t_ss = time_it([&] { raw_s = expose_serial(big, sensor, maps); });
    const double t_sp = time_it([&] { raw_p = expose(big, sensor, maps); });
    report("sensor expose (768x576)", t_ss, t_sp, raw_s.dn == raw_p.dn);

    // Demosaic.
    RgbImage rgb_s, rgb_p;
    const double t_ds = time_it([&] { rgb_s = demosaic_bilinear_serial(raw_s); });
    const double t_dp = time_it([&] { rgb_p = demosaic_bilinear(raw_s); });
    report("demosaic (768x576)", t_ds, t_dp,
           rgb_s.ch[0] == rgb_p.ch[0] && rgb_s.ch[1] == rgb_p.ch[1] && rgb_s.ch[2] == rgb_p.ch[2]);

    return 0;
}
