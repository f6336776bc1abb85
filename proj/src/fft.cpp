// SPDX-License-Identifier: Apache-2.0
#include "camsim/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "camsim/common.hpp"

namespace camsim::fft {

namespace {

// FFTW's planner is not thread-safe; executing distinct plans is. Plans are
// created once per (h, w, direction) with FFTW_ESTIMATE | FFTW_UNALIGNED so
// they can run on any caller buffer via the new-array interface.
std::mutex plan_mutex;

fftw_plan plan_for(int height, int width, bool inverse) {
    static std::map<std::tuple<int, int, bool>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    const auto key = std::make_tuple(height, width, inverse);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> scratch(static_cast<size_t>(height) * width);
    fftw_complex* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(height, width, buf, buf,
                                      inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    check(plan != nullptr, "fft: plan creation failed");
    cache.emplace(key, plan);
    return plan;
}

}  // namespace

void fft2d(std::complex<double>* data, int height, int width, bool inverse) {
    check(height > 0 && width > 0, "fft: dimensions must be positive");
    fftw_plan plan = plan_for(height, width, inverse);
    fftw_complex* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, buf, buf);
    if (inverse) {
        const double norm = 1.0 / (static_cast<double>(height) * width);
        const size_t n = static_cast<size_t>(height) * width;
        for (size_t i = 0; i < n; ++i) data[i] *= norm;
    }
}

void fftshift2d(std::complex<double>* data, int height, int width) {
    check(height % 2 == 0 && width % 2 == 0, "fftshift2d: even dimensions required");
    const int hh = height / 2, hw = width / 2;
    for (int y = 0; y < hh; ++y)
        for (int x = 0; x < width; ++x) {
            const int x2 = (x + hw) % width;
            std::swap(data[static_cast<size_t>(y) * width + x],
                      data[static_cast<size_t>(y + hh) * width + x2]);
        }
}

void dft2d_reference(std::complex<double>* data, int height, int width, bool inverse) {
    const double sign = inverse ? 1.0 : -1.0;
    auto dft1d = [&](std::complex<double>* row, int n, int stride) {
        std::vector<std::complex<double>> out(n);
        for (int k = 0; k < n; ++k) {
            std::complex<double> sum = 0.0;
            for (int j = 0; j < n; ++j) {
                const double ang = sign * 2.0 * constants::pi * k * j / n;
                sum += row[static_cast<size_t>(j) * stride] *
                       std::complex<double>(std::cos(ang), std::sin(ang));
            }
            out[k] = sum;
        }
        for (int k = 0; k < n; ++k) row[static_cast<size_t>(k) * stride] = out[k];
    };
    for (int y = 0; y < height; ++y) dft1d(data + static_cast<size_t>(y) * width, width, 1);
    for (int x = 0; x < width; ++x) dft1d(data + x, height, width);
    if (inverse) {
        const double norm = 1.0 / (static_cast<double>(height) * width);
        for (size_t i = 0; i < static_cast<size_t>(height) * width; ++i) data[i] *= norm;
    }
}

}  // namespace camsim::fft
