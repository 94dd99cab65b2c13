#include "ghosttrack/pgm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "ghosttrack/errors.hpp"

namespace ghosttrack {

namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            if (!tok.empty()) break;
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

int header_int(std::istream& in, const char* field) {
    const std::string tok = header_token(in);
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string("malformed PGM header field ") + field + ": '" + tok + "'");
    }
}

}  // namespace

PgmImage read_pgm(std::istream& in) {
    if (header_token(in) != "P5") throw ConfigError("not a binary PGM (P5) stream");
    const int width = header_int(in, "width");
    const int height = header_int(in, "height");
    const int maxval = header_int(in, "maxval");
    if (width <= 0 || height <= 0) throw ConfigError("PGM dimensions must be positive");
    if (maxval <= 0 || maxval > 65535) throw ConfigError("PGM maxval out of range");

    PgmImage img;
    img.maxval = maxval;
    img.pixels.resize(height, width);
    const bool wide = maxval > 255;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            int v = in.get();
            if (wide && v != EOF) {
                const int lo = in.get();
                v = lo == EOF ? EOF : (v << 8) | lo;
            }
            if (v == EOF) throw ConfigError("truncated PGM raster");
            if (v > maxval) throw ConfigError("PGM sample exceeds maxval");
            img.pixels(y, x) = static_cast<std::uint16_t>(v);
        }
    }
    return img;
}

PgmImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open PGM for reading", path);
    return read_pgm(in);
}

void write_pgm(std::ostream& out, const Image8& img) {
    out << "P5\n" << img.cols() << ' ' << img.rows() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data()), static_cast<std::streamsize>(img.size()));
}

void write_pgm(const std::filesystem::path& path, const Image8& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open PGM for writing", path);
    write_pgm(out, img);
    if (!out) throw IoError("failed writing PGM", path);
}

Image8 to_gray8(const ImageD& img) {
    const double lo = img.minCoeff();
    const double hi = img.maxCoeff();
    if (!(hi > lo)) return Image8::Zero(img.rows(), img.cols());
    return ((img.array() - lo) / (hi - lo) * 255.0).round().cast<std::uint8_t>().matrix();
}

}  // namespace ghosttrack
