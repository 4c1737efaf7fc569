#include "writers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <zlib.h>

namespace skinlat::cli {

namespace {

// Grey levels in [0, 1] per pixel, row-major with the first row at v = L.
std::vector<double> intensities(const DensityProfile& profile, HeatmapScale scale) {
    const int l = profile.l();
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(l) * l);
    for (int v = l; v >= 1; --v)
        for (int w = 1; w <= l; ++w) {
            const double rho = profile.at(w, v);
            vals.push_back(scale == HeatmapScale::Log ? std::log10(std::max(rho, kDensityFloor)) : rho);
        }
    const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    const double a = *lo, b = *hi;
    for (double& x : vals) x = b > a ? (x - a) / (b - a) : 0.5;
    return vals;
}

// Piecewise-linear approximation of a perceptual dark-blue to yellow ramp.
std::array<int, 3> ramp(double t) {
    static const std::array<std::array<double, 3>, 5> stops = {{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
    const double s = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(s), stops.size() - 2);
    const double f = s - static_cast<double>(i);
    std::array<int, 3> rgb{};
    for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround(stops[i][c] + f * (stops[i + 1][c] - stops[i][c])));
    return rgb;
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

CsvTable& CsvTable::row() {
    if (!rows_.empty() && rows_.back().size() != columns_.size()) throw std::logic_error("CsvTable: short row");
    rows_.emplace_back();
    return *this;
}

CsvTable& CsvTable::add(double x) { return add(format_number(x)); }

CsvTable& CsvTable::add(long long x) { return add(std::to_string(x)); }

CsvTable& CsvTable::add(const std::string& s) {
    if (rows_.empty() || rows_.back().size() >= columns_.size()) throw std::logic_error("CsvTable: row overflow");
    rows_.back().push_back(s);
    return *this;
}

std::string CsvTable::str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(columns_);
    for (const auto& r : rows_) {
        if (r.size() != columns_.size()) throw std::logic_error("CsvTable: short row");
        line(r);
    }
    return out;
}

std::string heatmap_pgm(const DensityProfile& profile, HeatmapScale scale) {
    const int l = profile.l();
    std::string out = "P5\n# skinlat density, row 1 is v=L, column 1 is w=1, ";
    out += scale == HeatmapScale::Log ? "log10 scale floored at 1e-14\n" : "linear scale\n";
    out += std::to_string(l) + " " + std::to_string(l) + "\n255\n";
    for (double t : intensities(profile, scale)) out += static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t)));
    return out;
}

std::string heatmap_svg(const DensityProfile& profile, HeatmapScale scale) {
    const int l = profile.l();
    const auto vals = intensities(profile, scale);
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + std::to_string(l) + " " +
                      std::to_string(l) + "\" width=\"" + std::to_string(8 * l) + "\" height=\"" + std::to_string(8 * l) +
                      "\" shape-rendering=\"crispEdges\">\n";
    out += "<!-- row 1 is v=L, column 1 is w=1 -->\n";
    char buf[128];
    for (int row = 0; row < l; ++row)
        for (int col = 0; col < l; ++col) {
            const auto rgb = ramp(vals[static_cast<std::size_t>(row) * l + col]);
            std::snprintf(buf, sizeof buf, "<rect x=\"%d\" y=\"%d\" width=\"1\" height=\"1\" fill=\"#%02x%02x%02x\"/>\n",
                          col, row, rgb[0], rgb[1], rgb[2]);
            out += buf;
        }
    out += "</svg>\n";
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::uint32_t crc32_of(const std::string& bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
    return static_cast<std::uint32_t>(crc);
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace skinlat::cli
