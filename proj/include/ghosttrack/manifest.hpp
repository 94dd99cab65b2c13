#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ghosttrack {

struct ManifestEntry {
    std::string file;    // relative to the output directory
    std::string sha256;  // lowercase hex
};

struct Manifest {
    std::filesystem::path directory;
    std::vector<ManifestEntry> entries;
};

std::string sha256_file(const std::filesystem::path& path);

/// Hashes each listed file under `dir` and writes manifest.txt in
/// `sha256sum` format (`<hex>  <file>`).
Manifest write_manifest(const std::filesystem::path& dir, const std::vector<std::string>& files);

}  // namespace ghosttrack
