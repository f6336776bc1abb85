// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "camsim/raster.hpp"
#include "camsim/sensor.hpp"

namespace camsim {

/// Planar RGB raster (demosaicked digital values).
struct RgbImage {
    int width = 0;
    int height = 0;
    std::array<std::vector<double>, 3> ch;

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h) {
        for (auto& c : ch) c.assign(static_cast<size_t>(w) * h, 0.0);
    }
    double at(int c, int x, int y) const { return ch[c][static_cast<size_t>(y) * width + x]; }
    double& at(int c, int x, int y) { return ch[c][static_cast<size_t>(y) * width + x]; }
};

/// Missing channels reconstructed as the average of the nearest same-channel
/// neighbors in the 3x3 neighborhood; image borders use what is available.
/// Values at native CFA sites are preserved exactly.
RgbImage demosaic_bilinear(const DigitalImage& img);
RgbImage demosaic_bilinear_serial(const DigitalImage& img);

struct MtfCurve {
    std::vector<double> frequency;   // cycles/pixel unless scaled
    std::vector<double> modulation;  // 1 at zero frequency

    /// Rescale the axis to cycles/mm for a given pixel pitch.
    MtfCurve in_cycles_per_mm(double pixel_pitch_um) const;
};

/// ISO 12233-style slanted-edge SFR: per-row derivative centroids, linear
/// edge fit, projection onto the edge normal binned at 1/oversample pixel,
/// finite-difference LSF, Hamming window about the peak, DFT. The derivative
/// and binning responses are divided out so an ideal edge reports the plain
/// pixel-aperture MTF. The edge must run 2-43 degrees from vertical.
MtfCurve slanted_edge_mtf(const ImageF& region, int oversample = 4);

/// 3x3 channel crosstalk/gain transform between QE triples.
struct QeTransform {
    std::array<std::array<double, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

    std::string to_json() const;             // row-major 3x3 array
    static QeTransform from_json(const std::string& text);
    static QeTransform identity() { return QeTransform{}; }
};

/// Columnwise application: out_c(l) = sum_r in_r(l) * m[r][c].
std::array<SpectralDistribution, 3> apply_qe_transform(
    const std::array<SpectralDistribution, 3>& qe_rgb, const QeTransform& t);

/// Least squares argmin |predicted * M - measured|_F with n >= 3 full-rank
/// rows. When zero_threshold > 0, entries below it are pinned to zero and the
/// affected columns re-solved. residual_rms (optional) gets the final
/// Frobenius RMS per element.
QeTransform solve_qe_transform(const std::vector<std::array<double, 3>>& predicted,
                               const std::vector<std::array<double, 3>>& measured,
                               double* residual_rms = nullptr, double zero_threshold = 0.0);

struct Roi {
    int x = 0, y = 0, width = 0, height = 0;
};

struct RegionStats {
    std::array<double, 3> mean{};   // DN
    std::array<double, 3> stddev{}; // sample standard deviation, DN
    long count = 0;                 // pixels in the region
};

/// Per-channel mean/std over the ROI. The raw overload groups pixels by their
/// CFA channel; the RGB overload uses all ROI pixels per channel.
RegionStats region_stats(const RgbImage& img, const Roi& roi);
RegionStats region_stats(const DigitalImage& img, const Roi& roi);

/// Ordered per-channel values along one row, columns [col_begin, col_end).
std::array<std::vector<double>, 3> line_profile(const RgbImage& img, int row, int col_begin,
                                                int col_end);

}  // namespace camsim
