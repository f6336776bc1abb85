// SPDX-License-Identifier: Apache-2.0
#include "camsim/spectral_data.hpp"

#include <cmath>

namespace camsim {

namespace {

// CIE 1924 photopic V(lambda), 380-780 nm, 5 nm intervals.
constexpr int kVCount = 81;
constexpr double kV[kVCount] = {
    0.0000, 0.0001, 0.0001, 0.0002, 0.0004, 0.0006, 0.0012, 0.0022, 0.0040, 0.0073,
    0.0116, 0.0168, 0.0230, 0.0298, 0.0380, 0.0480, 0.0600, 0.0739, 0.0910, 0.1126,
    0.1390, 0.1693, 0.2080, 0.2586, 0.3230, 0.4073, 0.5030, 0.6082, 0.7100, 0.7932,
    0.8620, 0.9149, 0.9540, 0.9803, 0.9950, 1.0000, 0.9950, 0.9786, 0.9520, 0.9154,
    0.8700, 0.8163, 0.7570, 0.6949, 0.6310, 0.5668, 0.5030, 0.4412, 0.3810, 0.3210,
    0.2650, 0.2170, 0.1750, 0.1382, 0.1070, 0.0816, 0.0610, 0.0446, 0.0320, 0.0232,
    0.0170, 0.0119, 0.0082, 0.0057, 0.0041, 0.0029, 0.0021, 0.0015, 0.0010, 0.0007,
    0.0005, 0.0004, 0.0003, 0.0002, 0.0001, 0.0001, 0.0001, 0.0000, 0.0000, 0.0000,
    0.0000};

double gauss(double lam, double mu, double sigma) {
    const double t = (lam - mu) / sigma;
    return std::exp(-0.5 * t * t);
}

// Logistic step rising with wavelength.
double rise(double lam, double mu, double width) {
    return 1.0 / (1.0 + std::exp(-(lam - mu) / width));
}

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

// Smooth approximations of the 24 ColorChecker patches: base level plus a few
// Gaussian/logistic lobes per patch, clamped to [0,1]. Grays are the standard
// neutral series.
double mcc_value(int patch, double lam) {
    switch (patch) {
        case 0:  // dark skin
            return clamp01(0.06 + 0.12 * rise(lam, 600, 30) + 0.04 * gauss(lam, 470, 40));
        case 1:  // light skin
            return clamp01(0.15 + 0.42 * rise(lam, 585, 28) + 0.12 * gauss(lam, 470, 45));
        case 2:  // blue sky
            return clamp01(0.07 + 0.28 * gauss(lam, 450, 45) + 0.06 * rise(lam, 650, 30));
        case 3:  // foliage
            return clamp01(0.05 + 0.12 * gauss(lam, 545, 35) + 0.08 * rise(lam, 670, 25));
        case 4:  // blue flower
            return clamp01(0.10 + 0.30 * gauss(lam, 455, 40) + 0.22 * rise(lam, 630, 30));
        case 5:  // bluish green
            return clamp01(0.12 + 0.38 * gauss(lam, 500, 55) + 0.10 * gauss(lam, 560, 40));
        case 6:  // orange
            return clamp01(0.05 + 0.55 * rise(lam, 585, 18));
        case 7:  // purplish blue
            return clamp01(0.06 + 0.35 * gauss(lam, 450, 35) + 0.05 * rise(lam, 680, 25));
        case 8:  // moderate red
            return clamp01(0.06 + 0.42 * rise(lam, 600, 15) + 0.05 * gauss(lam, 440, 35));
        case 9:  // purple
            return clamp01(0.04 + 0.14 * gauss(lam, 435, 30) + 0.22 * rise(lam, 655, 22));
        case 10:  // yellow green
            return clamp01(0.06 + 0.40 * gauss(lam, 555, 50) + 0.25 * rise(lam, 650, 30));
        case 11:  // orange yellow
            return clamp01(0.06 + 0.52 * rise(lam, 565, 20));
        case 12:  // blue
            return clamp01(0.05 + 0.30 * gauss(lam, 445, 28));
        case 13:  // green
            return clamp01(0.05 + 0.28 * gauss(lam, 540, 40));
        case 14:  // red
            return clamp01(0.04 + 0.48 * rise(lam, 615, 12));
        case 15:  // yellow
            return clamp01(0.06 + 0.60 * rise(lam, 540, 22));
        case 16:  // magenta
            return clamp01(0.08 + 0.26 * gauss(lam, 440, 40) + 0.45 * rise(lam, 600, 20));
        case 17:  // cyan
            return clamp01(0.07 + 0.30 * gauss(lam, 485, 45));
        case 18: return 0.90;   // white 9.5
        case 19: return 0.59;   // neutral 8
        case 20: return 0.36;   // neutral 6.5
        case 21: return 0.20;   // neutral 5
        case 22: return 0.09;   // neutral 3.5
        case 23: return 0.031;  // black 2
        default: throw Error("mcc_reflectance: patch index out of range [0,24)");
    }
}

SpectralDistribution from_fn(const WavelengthGrid& grid, SpectralUnit unit, double (*fn)(double)) {
    std::vector<double> v(grid.count);
    for (int i = 0; i < grid.count; ++i) v[i] = fn(grid.wavelength(i));
    return SpectralDistribution(grid, std::move(v), unit);
}

double white_paint_fn(double lam) { return clamp01(0.72 + 0.05 * rise(lam, 430, 15)); }
double red_paper_fn(double lam) { return clamp01(0.04 + 0.56 * rise(lam, 595, 16)); }
double green_paper_fn(double lam) {
    return clamp01(0.04 + 0.42 * gauss(lam, 540, 42));
}
double led_fn(double lam) {
    return 0.95 * gauss(lam, 452, 12) + 0.72 * gauss(lam, 565, 62);
}

double qe_r_fn(double lam) {
    return clamp01(0.72 * gauss(lam, 605, 38) + 0.12 * gauss(lam, 530, 30) +
                   0.04 * gauss(lam, 450, 25));
}
double qe_g_fn(double lam) {
    return clamp01(0.78 * gauss(lam, 532, 42) + 0.08 * gauss(lam, 620, 30));
}
double qe_b_fn(double lam) {
    return clamp01(0.74 * gauss(lam, 462, 34) + 0.07 * gauss(lam, 550, 40));
}

}  // namespace

const SpectralDistribution& cie_photopic_5nm() {
    static const SpectralDistribution table = [] {
        return SpectralDistribution(WavelengthGrid(380.0, 5.0, kVCount),
                                    std::vector<double>(kV, kV + kVCount),
                                    SpectralUnit::Reflectance);
    }();
    return table;
}

SpectralDistribution mcc_reflectance(int patch, const WavelengthGrid& grid) {
    check(patch >= 0 && patch < 24, "mcc_reflectance: patch index out of range [0,24)");
    std::vector<double> v(grid.count);
    for (int i = 0; i < grid.count; ++i) v[i] = mcc_value(patch, grid.wavelength(i));
    return SpectralDistribution(grid, std::move(v), SpectralUnit::Reflectance);
}

SpectralDistribution white_paint_reflectance(const WavelengthGrid& grid) {
    return from_fn(grid, SpectralUnit::Reflectance, white_paint_fn);
}

SpectralDistribution red_paper_reflectance(const WavelengthGrid& grid) {
    return from_fn(grid, SpectralUnit::Reflectance, red_paper_fn);
}

SpectralDistribution green_paper_reflectance(const WavelengthGrid& grid) {
    return from_fn(grid, SpectralUnit::Reflectance, green_paper_fn);
}

SpectralDistribution led_source_spd(const WavelengthGrid& grid) {
    return from_fn(grid, SpectralUnit::Radiance, led_fn);
}

std::array<SpectralDistribution, 3> published_qe(const WavelengthGrid& grid) {
    return {from_fn(grid, SpectralUnit::QuantumEfficiency, qe_r_fn),
            from_fn(grid, SpectralUnit::QuantumEfficiency, qe_g_fn),
            from_fn(grid, SpectralUnit::QuantumEfficiency, qe_b_fn)};
}

const std::array<std::array<double, 3>, 3>& qe_crosstalk_matrix() {
    static const std::array<std::array<double, 3>, 3> m = {{{0.532, 0.0, 0.0},
                                                            {0.06, 0.70, 0.0},
                                                            {0.0, 0.36, 0.84}}};
    return m;
}

std::array<SpectralDistribution, 3> transformed_qe(const WavelengthGrid& grid) {
    const auto base = published_qe(grid);
    const auto& m = qe_crosstalk_matrix();
    std::array<std::vector<double>, 3> out;
    for (auto& v : out) v.assign(grid.count, 0.0);
    for (int i = 0; i < grid.count; ++i) {
        for (int col = 0; col < 3; ++col) {
            double s = 0.0;
            for (int row = 0; row < 3; ++row) s += base[row][i] * m[row][col];
            out[col][i] = clamp01(s);
        }
    }
    return {SpectralDistribution(grid, std::move(out[0]), SpectralUnit::QuantumEfficiency),
            SpectralDistribution(grid, std::move(out[1]), SpectralUnit::QuantumEfficiency),
            SpectralDistribution(grid, std::move(out[2]), SpectralUnit::QuantumEfficiency)};
}

}  // namespace camsim
