// SPDX-License-Identifier: Apache-2.0
#include "camsim/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace camsim {

namespace {

std::ofstream open_out(const std::string& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    check(static_cast<bool>(out), "cannot write " + path);
    return out;
}

std::ifstream open_in(const std::string& path, bool binary) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    check(static_cast<bool>(in), "cannot open " + path);
    return in;
}

}  // namespace

void write_spectral_raster(const std::string& path, const SpectralCube& cube) {
    std::ofstream out = open_out(path, true);
    out << "SPECTRAL-RASTER v1\n"
        << "width " << cube.width << "\n"
        << "height " << cube.height << "\n"
        << "grid " << cube.grid.start_nm << " " << cube.grid.step_nm << " " << cube.grid.count
        << "\n"
        << "unit " << unit_name(cube.unit) << "\n";
    std::vector<unsigned char> buf(cube.values.size() * 4);
    for (size_t i = 0; i < cube.values.size(); ++i) {
        const float f = static_cast<float>(cube.values[i]);
        uint32_t bits;
        static_assert(sizeof(bits) == sizeof(f));
        std::memcpy(&bits, &f, 4);
        buf[4 * i + 0] = bits & 0xFF;
        buf[4 * i + 1] = (bits >> 8) & 0xFF;
        buf[4 * i + 2] = (bits >> 16) & 0xFF;
        buf[4 * i + 3] = (bits >> 24) & 0xFF;
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    check(static_cast<bool>(out), "short write to " + path);
}

SpectralCube read_spectral_raster(const std::string& path) {
    std::ifstream in = open_in(path, true);
    std::string magic;
    std::getline(in, magic);
    check(magic == "SPECTRAL-RASTER v1", path + ": not a SPECTRAL-RASTER v1 file");
    std::string key;
    int width = 0, height = 0, count = 0;
    double start = 0, step = 0;
    std::string unit;
    in >> key >> width;
    check(key == "width", path + ": malformed header (width)");
    in >> key >> height;
    check(key == "height", path + ": malformed header (height)");
    in >> key >> start >> step >> count;
    check(key == "grid", path + ": malformed header (grid)");
    in >> key >> unit;
    check(key == "unit", path + ": malformed header (unit)");
    in.ignore(1);  // newline before binary payload

    SpectralCube cube(width, height, WavelengthGrid(start, step, count), unit_from_name(unit));
    std::vector<unsigned char> buf(cube.values.size() * 4);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    check(in.gcount() == static_cast<std::streamsize>(buf.size()), path + ": truncated payload");
    for (size_t i = 0; i < cube.values.size(); ++i) {
        const uint32_t bits = static_cast<uint32_t>(buf[4 * i]) |
                              (static_cast<uint32_t>(buf[4 * i + 1]) << 8) |
                              (static_cast<uint32_t>(buf[4 * i + 2]) << 16) |
                              (static_cast<uint32_t>(buf[4 * i + 3]) << 24);
        float f;
        std::memcpy(&f, &bits, 4);
        cube.values[i] = f;
    }
    return cube;
}

void write_pgm16(const std::string& path, const DigitalImage& img) {
    std::ofstream out = open_out(path, true);
    out << "P5\n"
        << "# cfa=" << img.cfa << " bits=" << img.bits << "\n"
        << img.width << " " << img.height << "\n"
        << img.max_dn() << "\n";
    std::vector<unsigned char> buf(img.dn.size() * 2);
    for (size_t i = 0; i < img.dn.size(); ++i) {
        buf[2 * i] = static_cast<unsigned char>(img.dn[i] >> 8);  // big-endian
        buf[2 * i + 1] = static_cast<unsigned char>(img.dn[i] & 0xFF);
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    check(static_cast<bool>(out), "short write to " + path);
}

DigitalImage read_pgm16(const std::string& path) {
    std::ifstream in = open_in(path, true);
    std::string magic;
    in >> magic;
    check(magic == "P5", path + ": not a binary PGM");

    std::string cfa = "RGGB";
    int bits = 0;
    int fields[3] = {0, 0, 0};
    int parsed = 0;
    while (parsed < 3) {
        in >> std::ws;
        if (in.peek() == '#') {
            std::string comment;
            std::getline(in, comment);
            const auto cpos = comment.find("cfa=");
            if (cpos != std::string::npos) {
                std::istringstream cs(comment.substr(cpos + 4));
                cs >> cfa;
            }
            const auto bpos = comment.find("bits=");
            if (bpos != std::string::npos) bits = std::atoi(comment.c_str() + bpos + 5);
            continue;
        }
        check(static_cast<bool>(in >> fields[parsed]), path + ": malformed PGM header");
        ++parsed;
    }
    const int width = fields[0], height = fields[1], maxval = fields[2];
    check(width > 0 && height > 0, path + ": bad dimensions");
    check(maxval > 255 && maxval < 65536, path + ": expected a 16-bit PGM");
    if (bits == 0) {
        bits = 0;
        while ((1 << bits) - 1 < maxval) ++bits;
    }
    in.ignore(1);  // single whitespace before payload

    DigitalImage img(width, height, bits, cfa);
    std::vector<unsigned char> buf(img.dn.size() * 2);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    check(in.gcount() == static_cast<std::streamsize>(buf.size()), path + ": truncated payload");
    for (size_t i = 0; i < img.dn.size(); ++i)
        img.dn[i] = static_cast<uint16_t>((buf[2 * i] << 8) | buf[2 * i + 1]);
    return img;
}

void write_ppm_preview(const std::string& path, const RgbImage& img, int max_dn) {
    check(max_dn > 0, "preview: max_dn must be positive");
    std::ofstream out = open_out(path, true);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> buf(static_cast<size_t>(img.width) * img.height * 3);
    size_t i = 0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c) {
                const double v = std::clamp(img.at(c, x, y) / max_dn, 0.0, 1.0);
                buf[i++] = static_cast<unsigned char>(
                    std::lround(255.0 * std::pow(v, 1.0 / 2.2)));
            }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

void write_mtf_csv(const std::string& path, const MtfCurve& curve) {
    std::ofstream out = open_out(path, false);
    out << "frequency,modulation\n";
    for (size_t i = 0; i < curve.frequency.size(); ++i)
        out << curve.frequency[i] << "," << curve.modulation[i] << "\n";
}

void write_profile_csv(const std::string& path, const std::array<std::vector<double>, 3>& rgb,
                       int col_begin) {
    std::ofstream out = open_out(path, false);
    out << "column,r,g,b\n";
    for (size_t i = 0; i < rgb[0].size(); ++i)
        out << col_begin + static_cast<int>(i) << "," << rgb[0][i] << "," << rgb[1][i] << ","
            << rgb[2][i] << "\n";
}

void write_region_stats_csv(const std::string& path, const std::vector<RegionStats>& stats) {
    std::ofstream out = open_out(path, false);
    out << "region,channel,mean,stddev,count\n";
    const char* names[3] = {"r", "g", "b"};
    for (size_t i = 0; i < stats.size(); ++i)
        for (int c = 0; c < 3; ++c)
            out << i << "," << names[c] << "," << stats[i].mean[c] << "," << stats[i].stddev[c]
                << "," << stats[i].count << "\n";
}

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
    const int w = 640, h = 480, ml = 60, mr = 20, mt = 40, mb = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (xmin > xmax) {
        xmin = 0;
        xmax = 1;
        ymin = 0;
        ymax = 1;
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };
    const char* colors[] = {"#d62728", "#2ca02c", "#1f77b4", "#9467bd", "#ff7f0e", "#8c564b"};

    std::ofstream out = open_out(path, false);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << w / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
        << "</text>\n";
    out << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='" << h - mb
        << "' stroke='black'/>\n";
    out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << h - mb
        << "' stroke='black'/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        out << "<text x='" << px(fx) << "' y='" << h - mb + 18
            << "' text-anchor='middle' font-size='11'>" << fx << "</text>\n";
        out << "<text x='" << ml - 8 << "' y='" << py(fy) + 4
            << "' text-anchor='end' font-size='11'>" << fy << "</text>\n";
    }
    out << "<text x='" << (ml + w - mr) / 2 << "' y='" << h - 12
        << "' text-anchor='middle' font-size='12'>" << x_label << "</text>\n";
    out << "<text x='16' y='" << (mt + h - mb) / 2
        << "' text-anchor='middle' font-size='12' transform='rotate(-90 16 "
        << (mt + h - mb) / 2 << ")'>" << y_label << "</text>\n";

    int ci = 0;
    for (const auto& s : series) {
        const char* color = colors[ci % 6];
        if (s.scatter) {
            for (size_t i = 0; i < s.x.size(); ++i)
                out << "<circle cx='" << px(s.x[i]) << "' cy='" << py(s.y[i])
                    << "' r='3' fill='" << color << "'/>\n";
        } else {
            out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
            for (size_t i = 0; i < s.x.size(); ++i)
                out << px(s.x[i]) << "," << py(s.y[i]) << " ";
            out << "'/>\n";
        }
        out << "<text x='" << w - mr - 120 << "' y='" << mt + 16 * ci + 12
            << "' font-size='11' fill='" << color << "'>" << s.label << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

}  // namespace camsim
