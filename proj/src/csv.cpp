#include "ghosttrack/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include "ghosttrack/errors.hpp"

namespace ghosttrack {

std::string format_real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ConfigError("CSV has no column '" + name + "'");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size())
            throw ConfigError("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                              std::to_string(table.header.size()));
        table.rows.push_back(std::move(cells));
    }
    if (!have_header) throw ConfigError("CSV is empty");
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open CSV", path);
    return read_csv(in);
}

double parse_real(const std::string& text) {
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + text + "'");
    }
}

TrajectoryRecord read_trajectory_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t tx = t.column("true_x"), ty = t.column("true_y");
    const std::size_t ex = t.column("est_x"), ey = t.column("est_y");
    TrajectoryRecord rec;
    for (const auto& row : t.rows) {
        rec.truth.push_back({parse_real(row[tx]), parse_real(row[ty])});
        rec.estimates.push_back({parse_real(row[ex]), parse_real(row[ey])});
    }
    return rec;
}

}  // namespace ghosttrack
