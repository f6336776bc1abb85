// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

namespace camsim::fft {

/// In-place 2D complex DFT (row-major, height x width). Forward transform is
/// unnormalized; the inverse divides by the element count. Runs on a single
/// thread per call so concurrent callers on disjoint buffers stay bitwise
/// deterministic.
void fft2d(std::complex<double>* data, int height, int width, bool inverse);

/// Centered-origin index swap (even sizes swap quadrants exactly).
void fftshift2d(std::complex<double>* data, int height, int width);

/// Naive O(n^2) DFT of one dimension at a time; reference for the wrapper.
void dft2d_reference(std::complex<double>* data, int height, int width, bool inverse);

}  // namespace camsim::fft
