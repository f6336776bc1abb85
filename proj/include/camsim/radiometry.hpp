// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "camsim/common.hpp"

namespace camsim {

/// Uniform wavelength sampling: start_nm + i*step_nm for i in [0, count).
struct WavelengthGrid {
    double start_nm = 400.0;
    double step_nm = 10.0;
    int count = 31;

    WavelengthGrid() = default;
    WavelengthGrid(double start, double step, int n);

    double wavelength(int i) const { return start_nm + i * step_nm; }
    double end_nm() const { return wavelength(count - 1); }
    bool operator==(const WavelengthGrid& o) const {
        return start_nm == o.start_nm && step_nm == o.step_nm && count == o.count;
    }
};

/// Default simulation grid: 400-700 nm in 10 nm steps.
WavelengthGrid default_grid();

enum class SpectralUnit {
    Radiance,           // W sr^-1 m^-2 nm^-1
    Irradiance,         // W m^-2 nm^-1
    Reflectance,        // unitless, [0,1]
    QuantumEfficiency,  // unitless, [0,1]
    Power,              // W nm^-1
};

const char* unit_name(SpectralUnit u);
SpectralUnit unit_from_name(const std::string& name);

/// Sampled spectral function tagged with its unit.
/// Values are validated at construction: non-negative everywhere, and within
/// [0,1] for reflectance and quantum efficiency.
struct SpectralDistribution {
    WavelengthGrid grid;
    std::vector<double> values;
    SpectralUnit unit = SpectralUnit::Reflectance;

    SpectralDistribution() = default;
    SpectralDistribution(WavelengthGrid g, std::vector<double> v, SpectralUnit u);

    /// Constant spectrum over a grid.
    static SpectralDistribution constant(WavelengthGrid g, double value, SpectralUnit u);

    double operator[](int i) const { return values[i]; }
    int count() const { return grid.count; }
};

/// Linear interpolation onto a new grid; zero outside the source support.
/// Bitwise identity when target equals the source grid.
SpectralDistribution resample(const SpectralDistribution& s, const WavelengthGrid& target);

/// Photometric luminance 683 * sum V(l)*L(l)*dl in cd/m^2, using the bundled
/// CIE 1924 photopic curve. Trapezoid endpoint weights for grids with
/// count >= 2; a single-sample grid integrates with the full step width.
double luminance(const SpectralDistribution& radiance);

/// Rectangle-rule spectral inner product sum a(l)*b(l)*dl. Grids must match.
double inner_product(const SpectralDistribution& a, const SpectralDistribution& b);

/// CIE 1924 photopic luminosity V(l), resampled from the bundled 5 nm table.
SpectralDistribution photopic_luminosity(const WavelengthGrid& grid);

/// Spectral CSV: header "wavelength_nm,value", strictly increasing wavelengths.
SpectralDistribution read_spectrum_csv(std::istream& in, SpectralUnit unit);
SpectralDistribution read_spectrum_csv_file(const std::string& path, SpectralUnit unit);
void write_spectrum_csv(std::ostream& out, const SpectralDistribution& s);

}  // namespace camsim
