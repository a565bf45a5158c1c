#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

namespace support {

// Fixed seeds keep property runs reproducible.
inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240917);
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline double rel_err(double got, double want) {
    const double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() /
               ("ethdyn_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Every <polyline points="..."> in document order.
inline std::vector<std::vector<std::pair<double, double>>> polylines(const std::string& svg) {
    std::vector<std::vector<std::pair<double, double>>> out;
    const std::string tag = "<polyline points=\"";
    for (auto pos = svg.find(tag); pos != std::string::npos; pos = svg.find(tag, pos + 1)) {
        const auto start = pos + tag.size();
        const auto end = svg.find('"', start);
        std::istringstream in(svg.substr(start, end - start));
        std::vector<std::pair<double, double>> pts;
        std::string item;
        while (in >> item) {
            const auto comma = item.find(',');
            pts.emplace_back(std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1)));
        }
        out.push_back(std::move(pts));
    }
    return out;
}

/// Numeric rows of a CSV with a header line.
inline std::vector<std::vector<double>> csv_rows(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            row.push_back(std::stod(cell));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace support
