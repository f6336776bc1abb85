// SPDX-License-Identifier: Apache-2.0
#include "camsim/radiometry.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "camsim/spectral_data.hpp"

namespace camsim {

WavelengthGrid::WavelengthGrid(double start, double step, int n)
    : start_nm(start), step_nm(step), count(n) {
    check(step > 0.0, "WavelengthGrid: step_nm must be > 0");
    check(n >= 1, "WavelengthGrid: count must be >= 1");
    check(start > 0.0, "WavelengthGrid: start_nm must be > 0");
}

WavelengthGrid default_grid() { return WavelengthGrid(400.0, 10.0, 31); }

const char* unit_name(SpectralUnit u) {
    switch (u) {
        case SpectralUnit::Radiance: return "radiance";
        case SpectralUnit::Irradiance: return "irradiance";
        case SpectralUnit::Reflectance: return "reflectance";
        case SpectralUnit::QuantumEfficiency: return "quantum-efficiency";
        case SpectralUnit::Power: return "power";
    }
    return "unknown";
}

SpectralUnit unit_from_name(const std::string& name) {
    if (name == "radiance") return SpectralUnit::Radiance;
    if (name == "irradiance") return SpectralUnit::Irradiance;
    if (name == "reflectance") return SpectralUnit::Reflectance;
    if (name == "quantum-efficiency") return SpectralUnit::QuantumEfficiency;
    if (name == "power") return SpectralUnit::Power;
    throw Error("unknown spectral unit tag: " + name);
}

SpectralDistribution::SpectralDistribution(WavelengthGrid g, std::vector<double> v, SpectralUnit u)
    : grid(g), values(std::move(v)), unit(u) {
    check(static_cast<int>(values.size()) == grid.count,
          "SpectralDistribution: values length must equal grid.count");
    const bool bounded = (u == SpectralUnit::Reflectance || u == SpectralUnit::QuantumEfficiency);
    for (double x : values) {
        check(std::isfinite(x), "SpectralDistribution: values must be finite");
        check(x >= 0.0, "SpectralDistribution: negative spectral value rejected");
        if (bounded) check(x <= 1.0, "SpectralDistribution: reflectance/QE value out of [0,1]");
    }
}

SpectralDistribution SpectralDistribution::constant(WavelengthGrid g, double value, SpectralUnit u) {
    return SpectralDistribution(g, std::vector<double>(g.count, value), u);
}

SpectralDistribution resample(const SpectralDistribution& s, const WavelengthGrid& target) {
    if (target == s.grid) return s;

    std::vector<double> out(target.count, 0.0);
    const double lo = s.grid.start_nm;
    const double hi = s.grid.end_nm();
    const double eps = 1e-9 * s.grid.step_nm;

    for (int i = 0; i < target.count; ++i) {
        const double lam = target.wavelength(i);
        if (lam < lo - eps || lam > hi + eps) continue;
        if (s.grid.count == 1) {
            // Point support: nonzero only at the sample itself.
            if (std::abs(lam - lo) <= eps) out[i] = s.values[0];
            continue;
        }
        double pos = (lam - lo) / s.grid.step_nm;
        int k = static_cast<int>(std::floor(pos));
        if (k >= s.grid.count - 1) {
            k = s.grid.count - 2;
            pos = s.grid.count - 1;
        }
        if (k < 0) {
            k = 0;
            pos = 0;
        }
        const double t = pos - k;
        out[i] = s.values[k] * (1.0 - t) + s.values[k + 1] * t;
    }
    return SpectralDistribution(target, std::move(out), s.unit);
}

double luminance(const SpectralDistribution& radiance) {
    check(radiance.unit == SpectralUnit::Radiance,
          "luminance: unit mismatch, expected radiance input");
    const SpectralDistribution v = photopic_luminosity(radiance.grid);
    const double step = radiance.grid.step_nm;
    double sum = 0.0;
    for (int i = 0; i < radiance.count(); ++i) {
        double w = step;
        if (radiance.count() >= 2 && (i == 0 || i == radiance.count() - 1)) w = 0.5 * step;
        sum += v[i] * radiance[i] * w;
    }
    return constants::luminous_efficacy * sum;
}

double inner_product(const SpectralDistribution& a, const SpectralDistribution& b) {
    check(a.grid == b.grid, "inner_product: wavelength grids must match");
    double sum = 0.0;
    for (int i = 0; i < a.count(); ++i) sum += a[i] * b[i];
    return sum * a.grid.step_nm;
}

SpectralDistribution photopic_luminosity(const WavelengthGrid& grid) {
    return resample(cie_photopic_5nm(), grid);
}

SpectralDistribution read_spectrum_csv(std::istream& in, SpectralUnit unit) {
    std::string line;
    check(static_cast<bool>(std::getline(in, line)), "spectral CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    check(line == "wavelength_nm,value", "spectral CSV: header must be 'wavelength_nm,value'");

    std::vector<double> wl;
    std::vector<double> val;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        double w = 0.0, v = 0.0;
        char comma = 0;
        check(static_cast<bool>(row >> w >> comma >> v) && comma == ',',
              "spectral CSV: malformed row '" + line + "'");
        check(wl.empty() || w > wl.back(), "spectral CSV: wavelengths must be strictly increasing");
        wl.push_back(w);
        val.push_back(v);
    }
    check(!wl.empty(), "spectral CSV: no samples");

    double step = 1.0;
    if (wl.size() >= 2) {
        step = wl[1] - wl[0];
        for (size_t i = 2; i < wl.size(); ++i)
            check(std::abs((wl[i] - wl[i - 1]) - step) <= 1e-6 * step,
                  "spectral CSV: wavelength spacing must be uniform");
    }
    return SpectralDistribution(WavelengthGrid(wl.front(), step, static_cast<int>(wl.size())),
                                std::move(val), unit);
}

SpectralDistribution read_spectrum_csv_file(const std::string& path, SpectralUnit unit) {
    std::ifstream in(path);
    check(static_cast<bool>(in), "spectral CSV: cannot open " + path);
    return read_spectrum_csv(in, unit);
}

void write_spectrum_csv(std::ostream& out, const SpectralDistribution& s) {
    out << "wavelength_nm,value\n";
    for (int i = 0; i < s.count(); ++i) out << s.grid.wavelength(i) << "," << s.values[i] << "\n";
}

}  // namespace camsim
