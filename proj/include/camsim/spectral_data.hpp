// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>

#include "camsim/radiometry.hpp"

namespace camsim {

/// CIE 1924 photopic luminosity function, 380-780 nm at 5 nm.
const SpectralDistribution& cie_photopic_5nm();

/// Bundled 24-patch ColorChecker-style reflectance set on an arbitrary grid.
/// Patches 18-23 are the neutral gray series (0.90 down to 0.031); the
/// chromatic patches are smooth approximations of the nominal patch hues.
SpectralDistribution mcc_reflectance(int patch, const WavelengthGrid& grid);

/// Matte surface spectra for the box walls and blocks.
SpectralDistribution white_paint_reflectance(const WavelengthGrid& grid);
SpectralDistribution red_paper_reflectance(const WavelengthGrid& grid);
SpectralDistribution green_paper_reflectance(const WavelengthGrid& grid);

/// Broadband LED-like source: narrow blue peak plus a wide phosphor lobe,
/// peak-normalized to 1. Tagged as radiance so it can scale an area light.
SpectralDistribution led_source_spd(const WavelengthGrid& grid);

/// Published-datasheet-style RGB quantum efficiency triple (order R, G, B).
std::array<SpectralDistribution, 3> published_qe(const WavelengthGrid& grid);

/// The 3x3 crosstalk/gain matrix applied to the published curves; row-major,
/// transformed = [r g b] * M per wavelength.
const std::array<std::array<double, 3>, 3>& qe_crosstalk_matrix();

/// Published curves with the crosstalk matrix applied (the simulation default).
std::array<SpectralDistribution, 3> transformed_qe(const WavelengthGrid& grid);

}  // namespace camsim
