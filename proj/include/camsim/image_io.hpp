// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "camsim/analysis.hpp"
#include "camsim/raster.hpp"
#include "camsim/sensor.hpp"

namespace camsim {

/// SPECTRAL-RASTER v1: five-line text header (magic, width, height,
/// "grid <start> <step> <count>", unit tag) followed by little-endian 32-bit
/// floats in wavelength-major planes.
void write_spectral_raster(const std::string& path, const SpectralCube& cube);
SpectralCube read_spectral_raster(const std::string& path);

/// 16-bit big-endian binary PGM; a comment line carries "cfa=<pattern>
/// bits=<n>" and maxval is 2^bits - 1.
void write_pgm16(const std::string& path, const DigitalImage& img);
DigitalImage read_pgm16(const std::string& path);

/// 8-bit PPM preview of a demosaicked image (gamma 1/2.2, scaled to max_dn).
void write_ppm_preview(const std::string& path, const RgbImage& img, int max_dn);

void write_mtf_csv(const std::string& path, const MtfCurve& curve);
void write_profile_csv(const std::string& path, const std::array<std::vector<double>, 3>& rgb,
                       int col_begin);
void write_region_stats_csv(const std::string& path, const std::vector<RegionStats>& stats);

/// Minimal standalone SVG line/scatter plot (CSV stays the authoritative
/// artifact; this is for quick looks).
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool scatter = false;
};
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

}  // namespace camsim
