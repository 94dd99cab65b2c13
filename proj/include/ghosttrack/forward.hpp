#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>

#include "ghosttrack/image.hpp"
#include "ghosttrack/scene.hpp"
#include "ghosttrack/speckle.hpp"

namespace ghosttrack {

enum class NoiseKind { none, gaussian };

/// Optional additive Gaussian noise on bucket values. Each frame index owns
/// its own RNG substream, so results do not depend on evaluation order.
struct NoiseConfig {
    NoiseKind kind = NoiseKind::none;
    double sigma = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

using BucketSeries = Series<double>;

/// Total transmitted intensity sum(I .* T) plus optional noise.
double bucket_measure(const SpeckleFrame& frame, const SceneFrame& scene,
                      const NoiseConfig& noise = {}, std::uint64_t frame_index = 0);

/// One bucket value per frame, frame i seeing scenes[i]. `first_index` offsets
/// the noise substream so segments of a longer run keep global frame indices.
BucketSeries measure_series(const SpeckleStack& stack, std::span<const SceneFrame> scenes,
                            const NoiseConfig& noise = {}, std::uint64_t first_index = 0);

/// Same as measure_series with every frame seeing one static scene.
BucketSeries measure_static(const SpeckleStack& stack, const SceneFrame& scene,
                            const NoiseConfig& noise = {}, std::uint64_t first_index = 0);

/// Single-column CSV with header "y".
void write_bucket_csv(std::ostream& out, const BucketSeries& buckets);

}  // namespace ghosttrack
