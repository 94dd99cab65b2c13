#pragma once

#include <filesystem>
#include <iosfwd>

#include "ghosttrack/image.hpp"

namespace ghosttrack {

struct PgmImage {
    Image<std::uint16_t> pixels;
    int maxval = 255;
};

/// Binary P5 reader. Accepts header comments and maxval up to 65535
/// (two-byte big-endian samples above 255).
PgmImage read_pgm(std::istream& in);
PgmImage read_pgm(const std::filesystem::path& path);

/// Binary P5 writer, maxval 255.
void write_pgm(std::ostream& out, const Image8& img);
void write_pgm(const std::filesystem::path& path, const Image8& img);

/// Min-max maps an image to [0, 255]; a constant image maps to all zeros.
Image8 to_gray8(const ImageD& img);

}  // namespace ghosttrack
