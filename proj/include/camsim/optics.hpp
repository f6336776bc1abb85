// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <map>
#include <vector>

#include "camsim/raster.hpp"

namespace camsim {

/// Square complex raster (pupil fields, transfer functions).
struct ComplexRaster {
    int n = 0;
    std::vector<std::complex<double>> v;

    ComplexRaster() = default;
    explicit ComplexRaster(int size) : n(size), v(static_cast<size_t>(size) * size) {}
    std::complex<double>& at(int x, int y) { return v[static_cast<size_t>(y) * n + x]; }
    const std::complex<double>& at(int x, int y) const {
        return v[static_cast<size_t>(y) * n + x];
    }
};

/// Shift-invariant wavefront model: diffraction-limited aperture with ANSI
/// Zernike terms (j = 0..5 supported; defocus is j = 4), plus an even radial
/// relative-illumination polynomial RI(r) = 1 + a2 r^2 + a4 r^4 + ...
struct OpticsConfig {
    double focal_length_mm = 4.38;
    double f_number = 1.73;
    std::map<int, double> zernike_um;     // ANSI single-index -> coefficient (um)
    std::vector<double> rel_illum;        // {a2, a4, ...}, empty = uniform
    int pupil_grid_size = 512;            // samples across the pupil diameter
    int pad_factor = 2;                   // zero-padding around the disc
    bool delta_psf = false;               // test mode: identity blur kernel

    void validate() const;
    double rel_illum_at(double r) const;  // r in [0, 1]
};

/// ANSI (OSA) orthonormal Zernike polynomial; j in [0, 5].
double zernike_ansi(int j, double rho, double theta);

/// Complex pupil: circ(rho) * exp(i 2 pi W / lambda), rim cells area-weighted.
/// Grid side is pupil_grid_size * pad_factor.
ComplexRaster pupil_function(const OpticsConfig& config, double lambda_nm);

/// |FT(pupil)|^2, centered, unit sum. Sample pitch is psf_sample_um().
ImageF psf(const OpticsConfig& config, double lambda_nm);
double psf_sample_um(const OpticsConfig& config, double lambda_nm);

/// FT of the PSF, DC centered at (n/2, n/2) and normalized to 1 there.
/// Frequency step between samples is otf_freq_step_cyc_per_mm().
ComplexRaster otf(const OpticsConfig& config, double lambda_nm);
double otf_freq_step_cyc_per_mm(const OpticsConfig& config, double lambda_nm);

/// Incoherent cutoff 1/(lambda N) in cycles/mm.
double diffraction_cutoff_cyc_per_mm(const OpticsConfig& config, double lambda_nm);

/// Bilinear magnitude/complex lookup on a centered transfer-function raster;
/// zero outside the sampled support.
std::complex<double> otf_sample(const ComplexRaster& tf, double freq_step_cyc_per_mm,
                                double fx_cyc_per_mm, double fy_cyc_per_mm);

/// Closed-form diffraction-limited MTF, argument f/f_cutoff.
double analytic_diffraction_mtf(double f_over_fc);

/// Thin-lens defocus: image-plane shift between the focused and actual object
/// distances, converted to the ANSI j=4 coefficient in um (magnitude).
double defocus_coefficient_um(double focal_length_mm, double f_number, double focus_distance_m,
                              double object_distance_m);

/// Per-wavelength PSF convolution (replicate-padded FFT), camera-equation
/// scaling pi/(4 N^2), and relative-illumination falloff. `pixel_pitch_um` is
/// the input cube's sample pitch; `downsample` >= 1 box-averages blocks of
/// that many samples, modeling the pixel aperture of a supersampled render.
IrradianceCube radiance_to_irradiance(const RadianceCube& cube, const OpticsConfig& config,
                                      double pixel_pitch_um, int downsample = 1);
IrradianceCube radiance_to_irradiance_serial(const RadianceCube& cube,
                                             const OpticsConfig& config, double pixel_pitch_um,
                                             int downsample = 1);

struct RelIllumFit {
    double a2 = 0.0;
    double a4 = 0.0;
    double residual_rms = 0.0;  // relative to the fitted center value
};

/// Least-squares even-polynomial fit of a flat-field image versus normalized
/// image height, constrained to 1 at r = 0.
RelIllumFit fit_relative_illumination(const ImageF& flat_field);

}  // namespace camsim
