#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "skinlat/localization.hpp"

namespace skinlat::cli {

// printf %.17g; nan and inf spelled out.
std::string format_number(double x);

// Headered CSV with LF line endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);
    CsvTable& row();
    CsvTable& add(double x);
    CsvTable& add(long long x);
    CsvTable& add(int x) { return add(static_cast<long long>(x)); }
    CsvTable& add(const std::string& s);
    std::string str() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

enum class HeatmapScale { Linear, Log };

// Binary P5 image, L x L, first row is v = L and first column w = 1.
std::string heatmap_pgm(const DensityProfile& profile, HeatmapScale scale);
std::string heatmap_svg(const DensityProfile& profile, HeatmapScale scale);

// Writes to a sibling temporary file, then renames over the target.
void write_atomic(const std::filesystem::path& path, const std::string& bytes);

std::uint32_t crc32_of(const std::string& bytes);

// JSON text with a trailing newline.
std::string dump_json(const nlohmann::json& j);

nlohmann::json complex_json(cplx z);

}  // namespace skinlat::cli
