// SPDX-License-Identifier: Apache-2.0
#include "camsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <json.hpp>

#include "camsim/linalg.hpp"

namespace camsim {

namespace {

RgbImage demosaic_impl(const DigitalImage& img, bool parallel) {
    check(img.width > 0 && img.height > 0, "demosaic: empty image");
    check(img.cfa.size() == 4, "demosaic: unknown CFA label");
    for (char c : img.cfa)
        check(c == 'R' || c == 'G' || c == 'B', "demosaic: unknown CFA label");

    RgbImage out(img.width, img.height);
#pragma omp parallel for schedule(static) if (parallel)
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                if (img.channel_at(x, y) == c) {
                    out.at(c, x, y) = img.at(x, y);
                    continue;
                }
                double sum = 0.0;
                int count = 0;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx, ny = y + dy;
                        if (!((dx | dy) != 0) || nx < 0 || ny < 0 || nx >= img.width ||
                            ny >= img.height)
                            continue;
                        if (img.channel_at(nx, ny) != c) continue;
                        // Green neighbors of an R/B site are the cross sites;
                        // skip diagonals so the stencil matches bilinear.
                        if (c == 1 && dx != 0 && dy != 0) continue;
                        sum += img.at(nx, ny);
                        ++count;
                    }
                out.at(c, x, y) = count > 0 ? sum / count : 0.0;
            }
        }
    }
    return out;
}

}  // namespace

RgbImage demosaic_bilinear(const DigitalImage& img) { return demosaic_impl(img, true); }
RgbImage demosaic_bilinear_serial(const DigitalImage& img) { return demosaic_impl(img, false); }

MtfCurve MtfCurve::in_cycles_per_mm(double pixel_pitch_um) const {
    check(pixel_pitch_um > 0.0, "MtfCurve: pixel pitch must be positive");
    MtfCurve out = *this;
    const double scale = 1000.0 / pixel_pitch_um;
    for (double& f : out.frequency) f *= scale;
    return out;
}

namespace {

struct EdgeFit {
    double intercept = 0.0;  // x position at y = 0 (pixel-center coordinates)
    double slope = 0.0;      // dx per dy
};

/// |derivative|-weighted centroid of one row, optionally restricted to a
/// window around a predicted position. Returns false when the row has no
/// usable contrast.
bool row_centroid(const ImageF& im, int y, double predicted, double window, double* centroid) {
    double wsum = 0.0, xsum = 0.0;
    for (int x = 0; x + 1 < im.width; ++x) {
        const double pos = x + 1.0;  // derivative sample sits between pixels
        if (window > 0.0 && std::abs(pos - predicted) > window) continue;
        const double d = std::abs(im.at(x + 1, y) - im.at(x, y));
        wsum += d;
        xsum += d * pos;
    }
    if (wsum <= 1e-12) return false;
    *centroid = xsum / wsum;
    return true;
}

EdgeFit fit_edge(const ImageF& im) {
    std::vector<double> ys, xs;
    for (int pass = 0; pass < 2; ++pass) {
        EdgeFit prior{};
        if (pass == 1) {
            // Fit of pass 0 available in xs/ys.
            double sy = 0, sx = 0, syy = 0, sxy = 0;
            const double n = static_cast<double>(ys.size());
            for (size_t i = 0; i < ys.size(); ++i) {
                sy += ys[i];
                sx += xs[i];
                syy += ys[i] * ys[i];
                sxy += ys[i] * xs[i];
            }
            const double denom = n * syy - sy * sy;
            check(std::abs(denom) > 1e-12, "slanted_edge_mtf: no detectable edge");
            prior.slope = (n * sxy - sy * sx) / denom;
            prior.intercept = (sx - prior.slope * sy) / n;
        }
        ys.clear();
        xs.clear();
        const double window = pass == 0 ? 0.0 : std::max(8.0, im.width / 6.0);
        for (int y = 0; y < im.height; ++y) {
            const double predicted = prior.intercept + prior.slope * (y + 0.5);
            double c = 0.0;
            if (row_centroid(im, y, pass == 0 ? 0.0 : predicted, window, &c)) {
                ys.push_back(y + 0.5);
                xs.push_back(c);
            }
        }
        check(ys.size() >= 4, "slanted_edge_mtf: no detectable edge");
    }
    double sy = 0, sx = 0, syy = 0, sxy = 0;
    const double n = static_cast<double>(ys.size());
    for (size_t i = 0; i < ys.size(); ++i) {
        sy += ys[i];
        sx += xs[i];
        syy += ys[i] * ys[i];
        sxy += ys[i] * xs[i];
    }
    const double denom = n * syy - sy * sy;
    check(std::abs(denom) > 1e-12, "slanted_edge_mtf: no detectable edge");
    EdgeFit fit;
    fit.slope = (n * sxy - sy * sx) / denom;
    fit.intercept = (sx - fit.slope * sy) / n;
    return fit;
}

}  // namespace

MtfCurve slanted_edge_mtf(const ImageF& region, int oversample) {
    check(oversample >= 2 && oversample <= 16, "slanted_edge_mtf: oversample must be in [2,16]");
    check(region.width >= 16 && region.height >= 8, "slanted_edge_mtf: region too small");

    const EdgeFit fit = fit_edge(region);
    const double angle_deg = std::atan(std::abs(fit.slope)) * 180.0 / constants::pi;
    check(angle_deg >= 2.0 && angle_deg <= 43.0,
          "slanted_edge_mtf: edge angle " + std::to_string(angle_deg) +
              " deg outside the usable 2-43 deg range from vertical");

    // Per-row affine normalization against the two plateaus. Row-to-row
    // illumination gradients are grid-locked relative to the projection bins
    // and would otherwise alias into a spurious 1 cycle/pixel response.
    ImageF flat = region;
    {
        const double margin = std::max(8.0, 0.15 * region.width);
        // Strip ends taper with fractional pixel coverage so the estimates
        // vary smoothly as the edge slides across the column grid.
        auto strip_means = [&](int y_begin, int y_end, double* mean_a, double* mean_b,
                               double* weight_a, double* weight_b) {
            double a = 0.0, b = 0.0, wa = 0.0, wb = 0.0;
            for (int y = y_begin; y < y_end; ++y) {
                const double edge_x = fit.intercept + fit.slope * (y + 0.5);
                for (int x = 0; x < region.width; ++x) {
                    const double d = (x + 0.5) - edge_x;
                    const double ca = std::clamp(-margin - d + 0.5, 0.0, 1.0);
                    const double cb = std::clamp(d - margin + 0.5, 0.0, 1.0);
                    a += ca * region.at(x, y);
                    wa += ca;
                    b += cb * region.at(x, y);
                    wb += cb;
                }
            }
            *mean_a = wa > 0.0 ? a / wa : 0.0;
            *mean_b = wb > 0.0 ? b / wb : 0.0;
            *weight_a = wa;
            *weight_b = wb;
        };
        double fallback_a, fallback_b, wa, wb;
        strip_means(0, region.height, &fallback_a, &fallback_b, &wa, &wb);
        check(wa >= 4.0 && wb >= 4.0, "slanted_edge_mtf: region too narrow across the edge");
        check(std::abs(fallback_b - fallback_a) >
                  1e-9 * std::max(std::abs(fallback_a), std::abs(fallback_b)) + 1e-300,
              "slanted_edge_mtf: no edge contrast");
        for (int y = 0; y < region.height; ++y) {
            double a, b, ra, rb;
            strip_means(y, y + 1, &a, &b, &ra, &rb);
            if (ra < 4.0) a = fallback_a;
            if (rb < 4.0) b = fallback_b;
            const double span = b - a;
            const double inv = std::abs(span) > 1e-12 * std::abs(fallback_b - fallback_a)
                                   ? 1.0 / span
                                   : 1.0 / (fallback_b - fallback_a);
            for (int x = 0; x < region.width; ++x)
                flat.at(x, y) = (region.at(x, y) - a) * inv;
        }
    }

    // Project pixel centers onto the edge normal and bin the ESF. Only the
    // distance range covered by every row is kept: partially covered end
    // bins sample row subsets and alias the row structure into the ESF.
    const double cos_theta = 1.0 / std::sqrt(1.0 + fit.slope * fit.slope);
    const double bin = 1.0 / oversample;
    double dmin = -1e30, dmax = 1e30;
    for (int y = 0; y < region.height; ++y) {
        const double edge_x = fit.intercept + fit.slope * (y + 0.5);
        const double row_min = (0.5 - edge_x) * cos_theta;
        const double row_max = ((region.width - 0.5) - edge_x) * cos_theta;
        dmin = std::max(dmin, std::min(row_min, row_max));
        dmax = std::min(dmax, std::max(row_min, row_max));
    }
    check(dmax > dmin, "slanted_edge_mtf: no detectable edge");
    const int nbins = static_cast<int>((dmax - dmin) / bin) + 1;
    check(nbins >= 4 * oversample, "slanted_edge_mtf: region too narrow across the edge");
    std::vector<double> esf(nbins, 0.0);
    std::vector<double> pos(nbins, 0.0);  // mean projected position per bin
    std::vector<long> hits(nbins, 0);

    auto bin_esf = [&](const ImageF& img) {
        std::fill(esf.begin(), esf.end(), 0.0);
        std::fill(pos.begin(), pos.end(), 0.0);
        std::fill(hits.begin(), hits.end(), 0L);
        for (int y = 0; y < region.height; ++y) {
            const double edge_x = fit.intercept + fit.slope * (y + 0.5);
            for (int x = 0; x < region.width; ++x) {
                const double d = ((x + 0.5) - edge_x) * cos_theta;
                const int k = static_cast<int>((d - dmin) / bin);
                if (k >= 0 && k < nbins) {
                    esf[k] += img.at(x, y);
                    pos[k] += d;
                    ++hits[k];
                }
            }
        }
    };
    bin_esf(flat);

    // Second normalization pass: refit each row affinely against the
    // first-pass profile over the whole row, then rebin. Strip-based gains
    // cannot follow the illumination once the spread function is wide enough
    // to leave no clean plateau, and the residual row structure is grid-
    // locked (it aliases to exactly 1 cycle/pixel).
    {
        std::vector<double> profile(nbins, 0.0);
        int first_k = -1, last_k = -1;
        for (int k = 0; k < nbins; ++k)
            if (hits[k] > 0) {
                profile[k] = esf[k] / static_cast<double>(hits[k]);
                if (first_k < 0) first_k = k;
                last_k = k;
            }
        check(first_k >= 0, "slanted_edge_mtf: no detectable edge");
        // Smooth the model over exactly one pixel (one bin-family cycle) so
        // per-row fits vary smoothly with the edge phase.
        std::vector<double> smooth = profile;
        for (int k = first_k; k <= last_k; ++k) {
            double acc = 0.0;
            int cnt = 0;
            for (int j = std::max(first_k, k - oversample / 2);
                 j <= std::min(last_k, k + oversample - 1 - oversample / 2); ++j)
                if (hits[j] > 0) {
                    acc += profile[j];
                    ++cnt;
                }
            if (cnt > 0) smooth[k] = acc / cnt;
        }
        auto model_at = [&](double d) {
            const double g = (d - dmin) / bin;
            int k = std::clamp(static_cast<int>(std::floor(g - 0.5)), first_k, last_k - 1);
            const double t = std::clamp(g - 0.5 - k, 0.0, 1.0);
            const double a = smooth[k];
            const double b = smooth[k + 1];
            return a * (1.0 - t) + b * t;
        };
        ImageF refit = region;
        bool ok = true;
        for (int y = 0; y < region.height && ok; ++y) {
            const double edge_x = fit.intercept + fit.slope * (y + 0.5);
            double sm = 0, sv = 0, smm = 0, smv = 0;
            int n = 0;
            for (int x = 0; x < region.width; ++x) {
                const double d = ((x + 0.5) - edge_x) * cos_theta;
                if (d < dmin || d > dmax) continue;
                const double m = model_at(d);
                const double v = region.at(x, y);
                sm += m;
                sv += v;
                smm += m * m;
                smv += m * v;
                ++n;
            }
            const double det = n * smm - sm * sm;
            if (n < 8 || std::abs(det) < 1e-12 * (smm + 1.0)) {
                ok = false;
                break;
            }
            const double beta = (n * smv - sm * sv) / det;
            const double alpha = (sv - beta * sm) / n;
            if (!(std::abs(beta) > 1e-12)) {
                ok = false;
                break;
            }
            for (int x = 0; x < region.width; ++x)
                refit.at(x, y) = (region.at(x, y) - alpha) / beta;
        }
        if (ok) bin_esf(refit);
    }
    // Average filled bins; bridge empty ones linearly. Keeping each bin's
    // actual mean sample position removes most of the phase-quantization
    // bias of nominal bin centers.
    int first = -1, last = -1;
    for (int k = 0; k < nbins; ++k)
        if (hits[k] > 0) {
            esf[k] /= static_cast<double>(hits[k]);
            pos[k] /= static_cast<double>(hits[k]);
            if (first < 0) first = k;
            last = k;
        }
    check(first >= 0 && last - first + 1 >= 4 * oversample,
          "slanted_edge_mtf: too few populated ESF bins");
    for (int k = first; k <= last; ++k) {
        if (hits[k] > 0) continue;
        int lo = k - 1;
        int hi = k + 1;
        while (hi <= last && hits[hi] == 0) ++hi;
        const double t = static_cast<double>(k - lo) / (hi - lo);
        esf[k] = esf[lo] * (1.0 - t) + esf[hi] * t;
        pos[k] = pos[lo] * (1.0 - t) + pos[hi] * t;
        hits[k] = -1;  // mark interpolated
    }

    // First-order resample of bin means onto exact bin centers. Bin
    // populations are locked to the pixel phase, so the mean sample position
    // ripples with a 1-pixel period; left uncorrected that ripple shows up
    // as a spurious response at exactly 1 cycle/pixel for wide LSFs.
    for (int k = first + 1; k < last; ++k) {
        const double center = dmin + (k + 0.5) * bin;
        const double span = pos[k + 1] - pos[k - 1];
        if (span > 0.0)
            esf[k] -= (esf[k + 1] - esf[k - 1]) / span * (pos[k] - center);
    }

    const int len = last - first;  // LSF sample count (forward differences)
    std::vector<double> lsf(len);
    std::vector<double> lsf_pos(len);
    for (int k = 0; k < len; ++k) {
        lsf[k] = esf[first + k + 1] - esf[first + k];
        lsf_pos[k] = dmin + (first + k + 1) * bin;  // uniform grid midpoints
    }

    // Hamming window centered on the LSF energy centroid.
    double esum = 0.0, ecen = 0.0;
    for (int k = 0; k < len; ++k) {
        const double e = lsf[k] * lsf[k];
        esum += e;
        ecen += e * k;
    }
    check(esum > 0.0, "slanted_edge_mtf: flat region, no edge energy");
    ecen /= esum;
    for (int k = 0; k < len; ++k) {
        const double u = (k - ecen) / len;  // in [-1, 1] scaled to window
        lsf[k] *= 0.54 + 0.46 * std::cos(2.0 * constants::pi * std::clamp(u, -0.5, 0.5));
    }

    // DTFT magnitude, normalized at DC; derivative and binning transfer
    // functions divided out (both are sinc in the bin width).
    MtfCurve curve;
    const double f_max = 0.5 * oversample;  // cycles/pixel
    const int nf = 101;
    double dc = 0.0;
    for (int k = 0; k < len; ++k) dc += lsf[k];
    check(std::abs(dc) > 0.0, "slanted_edge_mtf: zero edge contrast");
    for (int j = 0; j < nf; ++j) {
        const double f = f_max * j / (nf - 1);
        std::complex<double> acc = 0.0;
        for (int k = 0; k < len; ++k) {
            const double ang = -2.0 * constants::pi * f * lsf_pos[k];
            acc += lsf[k] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        double m = std::abs(acc) / std::abs(dc);
        if (j > 0) {
            const double u = constants::pi * f * bin;
            const double sinc = std::sin(u) / u;
            m /= sinc * sinc;
        }
        curve.frequency.push_back(f);
        curve.modulation.push_back(j == 0 ? 1.0 : m);
    }
    return curve;
}

std::string QeTransform::to_json() const {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int r = 0; r < 3; ++r) rows.push_back(m[r]);
    return rows.dump() + "\n";
}

QeTransform QeTransform::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(std::string("QeTransform: invalid JSON: ") + e.what());
    }
    check(j.is_array() && j.size() == 3, "QeTransform: expected a 3x3 array");
    QeTransform t;
    for (int r = 0; r < 3; ++r) {
        check(j[r].is_array() && j[r].size() == 3, "QeTransform: expected a 3x3 array");
        for (int c = 0; c < 3; ++c) t.m[r][c] = j[r][c].get<double>();
    }
    return t;
}

std::array<SpectralDistribution, 3> apply_qe_transform(
    const std::array<SpectralDistribution, 3>& qe_rgb, const QeTransform& t) {
    check(qe_rgb[0].grid == qe_rgb[1].grid && qe_rgb[1].grid == qe_rgb[2].grid,
          "apply_qe_transform: QE curves must share one grid");
    const WavelengthGrid grid = qe_rgb[0].grid;
    std::array<std::vector<double>, 3> out;
    for (auto& v : out) v.assign(grid.count, 0.0);
    for (int i = 0; i < grid.count; ++i)
        for (int c = 0; c < 3; ++c) {
            double s = 0.0;
            for (int r = 0; r < 3; ++r) s += qe_rgb[r][i] * t.m[r][c];
            check(s > -1e-9 && s < 1.0 + 1e-9,
                  "apply_qe_transform: transformed QE outside [0,1]");
            out[c][i] = std::clamp(s, 0.0, 1.0);
        }
    return {SpectralDistribution(grid, std::move(out[0]), SpectralUnit::QuantumEfficiency),
            SpectralDistribution(grid, std::move(out[1]), SpectralUnit::QuantumEfficiency),
            SpectralDistribution(grid, std::move(out[2]), SpectralUnit::QuantumEfficiency)};
}

namespace {

/// Solve one column of |P m - q| allowing a subset of the three coefficients.
std::array<double, 3> solve_column(const std::vector<std::array<double, 3>>& p,
                                   const std::vector<double>& q,
                                   const std::array<bool, 3>& active) {
    int idx[3], na = 0;
    for (int i = 0; i < 3; ++i)
        if (active[i]) idx[na++] = i;
    std::array<double, 3> full{};
    if (na == 0) return full;
    std::array<std::array<double, 3>, 3> ata{};
    std::array<double, 3> atq{};
    for (size_t row = 0; row < p.size(); ++row)
        for (int i = 0; i < na; ++i) {
            for (int k = 0; k < na; ++k) ata[i][k] += p[row][idx[i]] * p[row][idx[k]];
            atq[i] += p[row][idx[i]] * q[row];
        }
    // Pad the inactive block with identity so the 3x3 solver stays usable.
    for (int i = na; i < 3; ++i) ata[i][i] = 1.0;
    std::array<double, 3> x{};
    try {
        x = solve_linear<3>(ata, atq);
    } catch (const Error&) {
        throw Error("solve_qe_transform: rank-deficient predicted matrix");
    }
    for (int i = 0; i < na; ++i) full[idx[i]] = x[i];
    return full;
}

double residual(const std::vector<std::array<double, 3>>& p,
                const std::vector<std::array<double, 3>>& q, const QeTransform& t) {
    double ss = 0.0;
    for (size_t row = 0; row < p.size(); ++row)
        for (int c = 0; c < 3; ++c) {
            double v = 0.0;
            for (int r = 0; r < 3; ++r) v += p[row][r] * t.m[r][c];
            const double e = v - q[row][c];
            ss += e * e;
        }
    return std::sqrt(ss / (3.0 * static_cast<double>(p.size())));
}

}  // namespace

QeTransform solve_qe_transform(const std::vector<std::array<double, 3>>& predicted,
                               const std::vector<std::array<double, 3>>& measured,
                               double* residual_rms, double zero_threshold) {
    check(predicted.size() == measured.size(),
          "solve_qe_transform: predicted/measured row counts differ");
    check(predicted.size() >= 3, "solve_qe_transform: need at least 3 rows");

    QeTransform t;
    for (int c = 0; c < 3; ++c) {
        std::vector<double> q(measured.size());
        for (size_t row = 0; row < measured.size(); ++row) q[row] = measured[row][c];
        const auto col = solve_column(predicted, q, {true, true, true});
        for (int r = 0; r < 3; ++r) t.m[r][c] = col[r];
    }

    if (zero_threshold > 0.0) {
        for (int c = 0; c < 3; ++c) {
            std::array<bool, 3> active{};
            bool changed = false;
            for (int r = 0; r < 3; ++r) {
                active[r] = std::abs(t.m[r][c]) >= zero_threshold;
                changed |= !active[r];
            }
            if (!changed) continue;
            std::vector<double> q(measured.size());
            for (size_t row = 0; row < measured.size(); ++row) q[row] = measured[row][c];
            const auto col = solve_column(predicted, q, active);
            for (int r = 0; r < 3; ++r) t.m[r][c] = col[r];
        }
    }

    if (residual_rms) *residual_rms = residual(predicted, measured, t);
    return t;
}

namespace {

void check_roi(int w, int h, const Roi& roi) {
    check(roi.x >= 0 && roi.y >= 0 && roi.width > 0 && roi.height > 0 &&
              roi.x + roi.width <= w && roi.y + roi.height <= h,
          "region_stats: ROI out of bounds");
    check(static_cast<long>(roi.width) * roi.height >= 16,
          "region_stats: ROI must cover at least 16 pixels");
}

RegionStats finalize(const std::array<double, 3>& sum, const std::array<double, 3>& sum2,
                     const std::array<long, 3>& n, long count) {
    RegionStats s;
    s.count = count;
    for (int c = 0; c < 3; ++c) {
        if (n[c] == 0) continue;
        const double mean = sum[c] / n[c];
        s.mean[c] = mean;
        if (n[c] > 1) {
            const double var = (sum2[c] - sum[c] * sum[c] / n[c]) / (n[c] - 1);
            s.stddev[c] = var > 0.0 ? std::sqrt(var) : 0.0;
        }
    }
    return s;
}

}  // namespace

RegionStats region_stats(const RgbImage& img, const Roi& roi) {
    check_roi(img.width, img.height, roi);
    std::array<double, 3> sum{}, sum2{};
    std::array<long, 3> n{};
    for (int y = roi.y; y < roi.y + roi.height; ++y)
        for (int x = roi.x; x < roi.x + roi.width; ++x)
            for (int c = 0; c < 3; ++c) {
                const double v = img.at(c, x, y);
                sum[c] += v;
                sum2[c] += v * v;
                ++n[c];
            }
    return finalize(sum, sum2, n, static_cast<long>(roi.width) * roi.height);
}

RegionStats region_stats(const DigitalImage& img, const Roi& roi) {
    check_roi(img.width, img.height, roi);
    std::array<double, 3> sum{}, sum2{};
    std::array<long, 3> n{};
    for (int y = roi.y; y < roi.y + roi.height; ++y)
        for (int x = roi.x; x < roi.x + roi.width; ++x) {
            const int c = img.channel_at(x, y);
            const double v = img.at(x, y);
            sum[c] += v;
            sum2[c] += v * v;
            ++n[c];
        }
    return finalize(sum, sum2, n, static_cast<long>(roi.width) * roi.height);
}

std::array<std::vector<double>, 3> line_profile(const RgbImage& img, int row, int col_begin,
                                                int col_end) {
    check(row >= 0 && row < img.height, "line_profile: row out of bounds");
    check(col_begin >= 0 && col_end > col_begin && col_end <= img.width,
          "line_profile: column range out of bounds");
    std::array<std::vector<double>, 3> out;
    for (int c = 0; c < 3; ++c) {
        out[c].reserve(col_end - col_begin);
        for (int x = col_begin; x < col_end; ++x) out[c].push_back(img.at(c, x, row));
    }
    return out;
}

}  // namespace camsim
