#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "ghosttrack/image.hpp"

namespace ghosttrack {

/// Block-constant Bernoulli speckle on a fov_width x fov_height grid.
struct SpeckleConfig {
    int fov_width = 64;
    int fov_height = 64;
    int macro_pixel = 2;
    double bernoulli_p = 0.5;
    double on_value = 1.0;
    double off_value = 0.0;

    Extent extent() const { return {fov_width, fov_height}; }

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

using SpeckleFrame = ImageD;

struct SpeckleStack {
    std::vector<SpeckleFrame> frames;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    std::size_t size() const { return frames.size(); }
    const SpeckleFrame& operator[](std::size_t i) const { return frames[i]; }
    auto begin() const { return frames.begin(); }
    auto end() const { return frames.end(); }
};

/// Generates `count` frames from the RNG stream keyed by (seed, stream).
/// Frames are drawn in order, blocks row-major within a frame, so a shorter
/// stack is always a prefix of a longer one with the same key.
SpeckleStack generate_stack(const SpeckleConfig& cfg, std::uint64_t seed, std::size_t count,
                            std::uint64_t stream = 0);

/// Writes one frame as 8-bit P5 with off_value -> 0 and on_value -> 255.
void write_speckle_pgm(const std::filesystem::path& path, const SpeckleFrame& frame,
                       const SpeckleConfig& cfg);

}  // namespace ghosttrack
