#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ghosttrack/metrics.hpp"

namespace ghosttrack {

/// Six significant digits ("%.6g"); infinities print as inf / -inf.
std::string format_real(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws ConfigError if absent.
    std::size_t column(const std::string& name) const;
};

/// Comma-delimited, header row first, no quoting.
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

double parse_real(const std::string& text);

/// Loads truth and estimate centers from a trajectory.csv file.
TrajectoryRecord read_trajectory_csv(const std::filesystem::path& path);

}  // namespace ghosttrack
