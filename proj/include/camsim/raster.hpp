// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "camsim/common.hpp"
#include "camsim/radiometry.hpp"

namespace camsim {

/// Dense row-major 2D raster.
template <typename T>
struct Image {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Image() = default;
    Image(int w, int h, T fill = T{}) : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {
        check(w > 0 && h > 0, "Image dimensions must be positive");
    }

    T& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    const T& at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return data.size(); }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

using ImageF = Image<double>;
using ImageU16 = Image<uint16_t>;

/// H x W x N-wavelength raster stored in wavelength-major planes.
/// Serves as both RadianceCube and IrradianceCube depending on the unit tag.
struct SpectralCube {
    int width = 0;
    int height = 0;
    WavelengthGrid grid{400.0, 10.0, 31};
    SpectralUnit unit = SpectralUnit::Radiance;
    std::vector<double> values;  // index = (band*height + y)*width + x

    SpectralCube() = default;
    SpectralCube(int w, int h, WavelengthGrid g, SpectralUnit u)
        : width(w), height(h), grid(g), unit(u), values(static_cast<size_t>(w) * h * g.count, 0.0) {
        check(w > 0 && h > 0, "SpectralCube dimensions must be positive");
    }

    double& at(int x, int y, int band) {
        return values[(static_cast<size_t>(band) * height + y) * width + x];
    }
    const double& at(int x, int y, int band) const {
        return values[(static_cast<size_t>(band) * height + y) * width + x];
    }
    double* plane(int band) { return values.data() + static_cast<size_t>(band) * height * width; }
    const double* plane(int band) const {
        return values.data() + static_cast<size_t>(band) * height * width;
    }

    /// Spectrum of one pixel (copies across planes).
    SpectralDistribution pixel_spectrum(int x, int y) const;
};

using RadianceCube = SpectralCube;
using IrradianceCube = SpectralCube;

}  // namespace camsim
