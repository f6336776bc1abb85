// SPDX-License-Identifier: Apache-2.0
#include "camsim/raster.hpp"

namespace camsim {

SpectralDistribution SpectralCube::pixel_spectrum(int x, int y) const {
    check(x >= 0 && x < width && y >= 0 && y < height, "pixel_spectrum: out of bounds");
    std::vector<double> v(grid.count);
    for (int b = 0; b < grid.count; ++b) v[b] = at(x, y, b);
    return SpectralDistribution(grid, std::move(v), unit);
}

}  // namespace camsim
