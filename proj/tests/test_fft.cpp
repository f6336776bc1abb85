// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <vector>

#include "camsim/fft.hpp"
#include "camsim/rng.hpp"

using namespace camsim;

namespace {
std::vector<std::complex<double>> random_grid(int h, int w, uint64_t seed) {
    Rng rng(seed, 0, 0);
    std::vector<std::complex<double>> v(static_cast<size_t>(h) * w);
    for (auto& c : v) c = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    return v;
}
}  // namespace

TEST_CASE("fft matches the reference DFT") {
    const int h = 16, w = 8;
    auto a = random_grid(h, w, 3);
    auto b = a;
    fft::fft2d(a.data(), h, w, false);
    fft::dft2d_reference(b.data(), h, w, false);
    for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-9);

    fft::fft2d(a.data(), h, w, true);
    fft::dft2d_reference(b.data(), h, w, true);
    for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-9);
}

TEST_CASE("inverse undoes forward") {
    const int h = 32, w = 32;
    const auto orig = random_grid(h, w, 11);
    auto a = orig;
    fft::fft2d(a.data(), h, w, false);
    fft::fft2d(a.data(), h, w, true);
    for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - orig[i]) < 1e-12);
}

TEST_CASE("parseval") {
    const int h = 16, w = 16;
    const auto orig = random_grid(h, w, 7);
    auto a = orig;
    fft::fft2d(a.data(), h, w, false);
    double e_space = 0, e_freq = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        e_space += std::norm(orig[i]);
        e_freq += std::norm(a[i]);
    }
    CHECK(e_freq / (h * w) == doctest::Approx(e_space).epsilon(1e-12));
}

TEST_CASE("fftshift is an involution for even sizes") {
    const int h = 8, w = 12;
    const auto orig = random_grid(h, w, 5);
    auto a = orig;
    fft::fftshift2d(a.data(), h, w);
    CHECK(a != orig);
    fft::fftshift2d(a.data(), h, w);
    CHECK(a == orig);
}
