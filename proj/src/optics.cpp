// SPDX-License-Identifier: Apache-2.0
#include "camsim/optics.hpp"

#include <algorithm>
#include <cmath>

#include "camsim/fft.hpp"
#include "camsim/linalg.hpp"

namespace camsim {

namespace {

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

void OpticsConfig::validate() const {
    check(f_number > 0.0, "optics: f_number must be positive");
    check(focal_length_mm > 0.0, "optics: focal length must be positive");
    check(pupil_grid_size >= 64, "optics: pupil_grid_size must be >= 64");
    check(pad_factor >= 2, "optics: pad_factor must be >= 2");
    for (const auto& [j, c] : zernike_um)
        check(j >= 0 && j <= 5, "optics: unsupported Zernike index j=" + std::to_string(j));
    for (int i = 0; i <= 100; ++i) {
        const double ri = rel_illum_at(i / 100.0);
        check(ri > 0.0 && ri <= 1.0 + 1e-12,
              "optics: relative illumination must stay in (0, 1] on [0, 1]");
    }
}

double OpticsConfig::rel_illum_at(double r) const {
    const double r2 = r * r;
    double ri = 1.0, p = 1.0;
    for (double c : rel_illum) {
        p *= r2;
        ri += c * p;
    }
    return ri;
}

double zernike_ansi(int j, double rho, double theta) {
    switch (j) {
        case 0: return 1.0;
        case 1: return 2.0 * rho * std::sin(theta);
        case 2: return 2.0 * rho * std::cos(theta);
        case 3: return std::sqrt(6.0) * rho * rho * std::sin(2.0 * theta);
        case 4: return std::sqrt(3.0) * (2.0 * rho * rho - 1.0);
        case 5: return std::sqrt(6.0) * rho * rho * std::cos(2.0 * theta);
        default: throw Error("zernike_ansi: unsupported index j=" + std::to_string(j));
    }
}

ComplexRaster pupil_function(const OpticsConfig& config, double lambda_nm) {
    config.validate();
    check(lambda_nm > 0.0, "pupil_function: wavelength must be positive");
    const int n = config.pupil_grid_size * config.pad_factor;
    const double radius = 0.5 * config.pupil_grid_size;  // in samples
    const double cx = 0.5 * n, cy = 0.5 * n;
    const double lambda_um = lambda_nm * 1e-3;
    ComplexRaster pupil(n);

    auto wavefront = [&](double rho, double theta) {
        double w = 0.0;
        for (const auto& [j, c] : config.zernike_um) w += c * zernike_ansi(j, rho, theta);
        return w;
    };

    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const double dx = (x + 0.5 - cx) / radius;
            const double dy = (y + 0.5 - cy) / radius;
            const double rho = std::sqrt(dx * dx + dy * dy);
            const double cell = 1.0 / radius;  // cell side in rho units
            if (rho > 1.0 + cell) continue;

            double coverage = 1.0;
            if (rho > 1.0 - cell) {
                // Anti-alias the rim: 4x4 sub-cell coverage.
                int inside = 0;
                for (int sy = 0; sy < 4; ++sy)
                    for (int sx = 0; sx < 4; ++sx) {
                        const double ux = (x + (sx + 0.5) / 4.0 - cx) / radius;
                        const double uy = (y + (sy + 0.5) / 4.0 - cy) / radius;
                        if (ux * ux + uy * uy <= 1.0) ++inside;
                    }
                coverage = inside / 16.0;
                if (coverage == 0.0) continue;
            }
            const double theta = std::atan2(dy, dx);
            const double phase =
                2.0 * constants::pi * wavefront(std::min(rho, 1.0), theta) / lambda_um;
            pupil.at(x, y) = std::polar(coverage, phase);
        }
    }
    return pupil;
}

double psf_sample_um(const OpticsConfig& config, double lambda_nm) {
    return lambda_nm * 1e-3 * config.f_number / config.pad_factor;
}

ImageF psf(const OpticsConfig& config, double lambda_nm) {
    ComplexRaster pupil = pupil_function(config, lambda_nm);
    const int n = pupil.n;
    fft::fft2d(pupil.v.data(), n, n, false);
    fft::fftshift2d(pupil.v.data(), n, n);
    ImageF out(n, n);
    double sum = 0.0;
    for (size_t i = 0; i < pupil.v.size(); ++i) {
        const double p = std::norm(pupil.v[i]);
        out.data[i] = p;
        sum += p;
    }
    check(sum > 0.0, "psf: empty pupil");
    const double inv = 1.0 / sum;
    for (double& p : out.data) p *= inv;
    return out;
}

ComplexRaster otf(const OpticsConfig& config, double lambda_nm) {
    ImageF point_spread = psf(config, lambda_nm);
    const int n = point_spread.width;
    ComplexRaster tf(n);
    for (size_t i = 0; i < tf.v.size(); ++i) tf.v[i] = point_spread.data[i];
    fft::fftshift2d(tf.v.data(), n, n);  // move PSF center to the origin
    fft::fft2d(tf.v.data(), n, n, false);
    const std::complex<double> dc = tf.v[0];
    check(std::abs(dc) > 0.0, "otf: zero DC");
    const std::complex<double> inv = 1.0 / dc;
    for (auto& c : tf.v) c *= inv;
    fft::fftshift2d(tf.v.data(), n, n);  // DC to (n/2, n/2)
    return tf;
}

double otf_freq_step_cyc_per_mm(const OpticsConfig& config, double lambda_nm) {
    const int n = config.pupil_grid_size * config.pad_factor;
    return 1000.0 / (n * psf_sample_um(config, lambda_nm));
}

double diffraction_cutoff_cyc_per_mm(const OpticsConfig& config, double lambda_nm) {
    return 1e6 / (lambda_nm * config.f_number);
}

std::complex<double> otf_sample(const ComplexRaster& tf, double freq_step_cyc_per_mm,
                                double fx_cyc_per_mm, double fy_cyc_per_mm) {
    const int n = tf.n;
    const double cx = 0.5 * n, cy = 0.5 * n;
    const double gx = cx + fx_cyc_per_mm / freq_step_cyc_per_mm;
    const double gy = cy + fy_cyc_per_mm / freq_step_cyc_per_mm;
    const int x0 = static_cast<int>(std::floor(gx));
    const int y0 = static_cast<int>(std::floor(gy));
    if (x0 < 0 || y0 < 0 || x0 + 1 >= n || y0 + 1 >= n) return 0.0;
    const double tx = gx - x0, ty = gy - y0;
    return tf.at(x0, y0) * ((1 - tx) * (1 - ty)) + tf.at(x0 + 1, y0) * (tx * (1 - ty)) +
           tf.at(x0, y0 + 1) * ((1 - tx) * ty) + tf.at(x0 + 1, y0 + 1) * (tx * ty);
}

double analytic_diffraction_mtf(double f_over_fc) {
    if (f_over_fc >= 1.0) return 0.0;
    if (f_over_fc <= 0.0) return 1.0;
    return 2.0 / constants::pi *
           (std::acos(f_over_fc) - f_over_fc * std::sqrt(1.0 - f_over_fc * f_over_fc));
}

double defocus_coefficient_um(double focal_length_mm, double f_number, double focus_distance_m,
                              double object_distance_m) {
    check(focal_length_mm > 0.0 && f_number > 0.0, "defocus: invalid lens parameters");
    const double f = focal_length_mm;
    const double focus_mm = focus_distance_m * 1000.0;
    const double object_mm = object_distance_m * 1000.0;
    check(focus_mm > f, "defocus: focus distance must exceed the focal length");
    check(object_mm > f, "defocus: object distance must exceed the focal length");
    const double si_focus = 1.0 / (1.0 / f - 1.0 / focus_mm);
    const double si_object = 1.0 / (1.0 / f - 1.0 / object_mm);
    const double dz_mm = si_object - si_focus;
    const double w020_um = dz_mm * 1000.0 / (8.0 * f_number * f_number);
    return std::abs(w020_um) / (2.0 * std::sqrt(3.0));
}

namespace {

/// Convolves one wavelength plane with the optics transfer function on a
/// replicate-padded power-of-two grid, then crops back.
void convolve_plane(const double* src, double* dst, int width, int height,
                    const ComplexRaster& tf, double tf_step, double pitch_um, int margin) {
    const int mw = next_pow2(width + 2 * margin);
    const int mh = next_pow2(height + 2 * margin);
    std::vector<std::complex<double>> grid(static_cast<size_t>(mw) * mh);
    for (int y = 0; y < mh; ++y) {
        const int sy = std::clamp(y - margin, 0, height - 1);
        for (int x = 0; x < mw; ++x) {
            const int sx = std::clamp(x - margin, 0, width - 1);
            grid[static_cast<size_t>(y) * mw + x] = src[static_cast<size_t>(sy) * width + sx];
        }
    }
    fft::fft2d(grid.data(), mh, mw, false);
    const double fx_step = 1000.0 / (mw * pitch_um);  // cycles/mm per bin
    const double fy_step = 1000.0 / (mh * pitch_um);
    for (int y = 0; y < mh; ++y) {
        const double fy = (y <= mh / 2 ? y : y - mh) * fy_step;
        for (int x = 0; x < mw; ++x) {
            const double fx = (x <= mw / 2 ? x : x - mw) * fx_step;
            grid[static_cast<size_t>(y) * mw + x] *= otf_sample(tf, tf_step, fx, fy);
        }
    }
    fft::fft2d(grid.data(), mh, mw, true);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            dst[static_cast<size_t>(y) * width + x] = std::max(
                0.0, grid[static_cast<size_t>(y + margin) * mw + (x + margin)].real());
}

int kernel_margin(const OpticsConfig& config, double pitch_um) {
    // Geometric defocus radius plus a diffraction-tail allowance.
    double w020 = 0.0;
    for (const auto& [j, c] : config.zernike_um)
        if (j >= 3 && j <= 5) w020 += std::abs(c) * 2.0 * std::sqrt(3.0);
    const double radius_um = 4.0 * config.f_number * w020 + 25.0 * 0.7 * config.f_number;
    return std::clamp(static_cast<int>(std::ceil(radius_um / pitch_um)), 8, 512);
}

IrradianceCube radiance_to_irradiance_impl(const RadianceCube& cube, const OpticsConfig& config,
                                           double pixel_pitch_um, int downsample, bool parallel) {
    config.validate();
    check(cube.unit == SpectralUnit::Radiance, "radiance_to_irradiance: radiance cube required");
    check(pixel_pitch_um > 0.0, "radiance_to_irradiance: pixel pitch must be positive");
    check(downsample >= 1, "radiance_to_irradiance: downsample must be >= 1");
    check(cube.width % downsample == 0 && cube.height % downsample == 0,
          "radiance_to_irradiance: dimensions must be divisible by the downsample factor");

    const int out_w = cube.width / downsample;
    const int out_h = cube.height / downsample;
    IrradianceCube out(out_w, out_h, cube.grid, SpectralUnit::Irradiance);

    const double n2 = config.f_number * config.f_number;
    const double camera_factor = constants::pi / (4.0 * n2);
    const int margin = config.delta_psf ? 0 : kernel_margin(config, pixel_pitch_um);

    // Relative illumination versus normalized distance from the image center.
    const double ocx = 0.5 * (out_w - 1), ocy = 0.5 * (out_h - 1);
    const double r_max = std::sqrt(ocx * ocx + ocy * ocy);
    std::vector<double> ri(static_cast<size_t>(out_w) * out_h);
    for (int y = 0; y < out_h; ++y)
        for (int x = 0; x < out_w; ++x) {
            const double r =
                r_max > 0.0 ? std::sqrt((x - ocx) * (x - ocx) + (y - ocy) * (y - ocy)) / r_max
                            : 0.0;
            ri[static_cast<size_t>(y) * out_w + x] = config.rel_illum_at(r);
        }

    const int bands = cube.grid.count;

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int b = 0; b < bands; ++b) {
        std::vector<double> plane(static_cast<size_t>(cube.width) * cube.height);
        const double* src = cube.plane(b);
        if (config.delta_psf) {
            std::copy(src, src + plane.size(), plane.begin());
        } else {
            const double lambda = cube.grid.wavelength(b);
            const ComplexRaster tf = otf(config, lambda);
            const double tf_step = otf_freq_step_cyc_per_mm(config, lambda);
            convolve_plane(src, plane.data(), cube.width, cube.height, tf, tf_step,
                           pixel_pitch_um, margin);
        }
        // Box-average downsample (pixel aperture of the supersampled grid),
        // camera equation, and shading.
        double* dst = out.plane(b);
        const double inv_block = 1.0 / (static_cast<double>(downsample) * downsample);
        for (int y = 0; y < out_h; ++y)
            for (int x = 0; x < out_w; ++x) {
                double sum = 0.0;
                for (int sy = 0; sy < downsample; ++sy) {
                    const double* row =
                        plane.data() + static_cast<size_t>(y * downsample + sy) * cube.width;
                    for (int sx = 0; sx < downsample; ++sx) sum += row[x * downsample + sx];
                }
                dst[static_cast<size_t>(y) * out_w + x] =
                    sum * inv_block * camera_factor * ri[static_cast<size_t>(y) * out_w + x];
            }
    }
    return out;
}

}  // namespace

IrradianceCube radiance_to_irradiance(const RadianceCube& cube, const OpticsConfig& config,
                                      double pixel_pitch_um, int downsample) {
    return radiance_to_irradiance_impl(cube, config, pixel_pitch_um, downsample, true);
}

IrradianceCube radiance_to_irradiance_serial(const RadianceCube& cube,
                                             const OpticsConfig& config, double pixel_pitch_um,
                                             int downsample) {
    return radiance_to_irradiance_impl(cube, config, pixel_pitch_um, downsample, false);
}

RelIllumFit fit_relative_illumination(const ImageF& flat_field) {
    const int w = flat_field.width, h = flat_field.height;
    check(w >= 3 && h >= 3, "fit_relative_illumination: image too small");
    const double cx = 0.5 * (w - 1), cy = 0.5 * (h - 1);
    const double r_max = std::sqrt(cx * cx + cy * cy);
    check(r_max > 0.0, "fit_relative_illumination: degenerate image");

    // v(r) = b0 * (1 + a2 r^2 + a4 r^4); linear LS in (b0, b0*a2, b0*a4).
    std::array<std::array<double, 3>, 3> ata{};
    std::array<double, 3> atv{};
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double r2 = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (r_max * r_max);
            const std::array<double, 3> row{1.0, r2, r2 * r2};
            const double v = flat_field.at(x, y);
            for (int i = 0; i < 3; ++i) {
                for (int k = 0; k < 3; ++k) ata[i][k] += row[i] * row[k];
                atv[i] += row[i] * v;
            }
        }
    std::array<double, 3> beta{};
    try {
        beta = solve_linear<3>(ata, atv);
    } catch (const Error&) {
        throw Error("fit_relative_illumination: degenerate data (constant radius)");
    }
    check(std::abs(beta[0]) > 1e-300, "fit_relative_illumination: zero center value");

    RelIllumFit fit;
    fit.a2 = beta[1] / beta[0];
    fit.a4 = beta[2] / beta[0];
    double ss = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double r2 = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (r_max * r_max);
            const double model = beta[0] + beta[1] * r2 + beta[2] * r2 * r2;
            const double e = (flat_field.at(x, y) - model) / beta[0];
            ss += e * e;
        }
    fit.residual_rms = std::sqrt(ss / (static_cast<double>(w) * h));
    return fit;
}

}  // namespace camsim
