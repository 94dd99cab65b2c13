#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ghosttrack/errors.hpp"
#include "ghosttrack/image.hpp"
#include "ghosttrack/reconstruct.hpp"

namespace ghosttrack {

struct WeightedPixel {
    int x = 0;
    int y = 0;
    double g = 0.0;  // pixel value over the image maximum
};

/// Pixels of a rough image whose normalized value g = O / max O satisfies
/// g >= threshold and g > 0. Always holds the argmax pixel.
struct ThresholdedSet {
    std::vector<WeightedPixel> pixels;
    double threshold = 0.0;
};

struct PositionEstimate {
    double x = 0.0;
    double y = 0.0;
    std::size_t support_size = 0;

    Point2 point() const { return {x, y}; }
};

template <typename Derived>
ThresholdedSet threshold_filter(const Eigen::MatrixBase<Derived>& rough, double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw UsageError("screening threshold must lie in [0, 1], got " + std::to_string(t));
    if (rough.size() == 0) throw UsageError("rough image is empty");
    const double peak = static_cast<double>(rough.maxCoeff());
    if (!(peak > 0.0)) throw DegenerateImageError("rough image has no positive correlation");

    ThresholdedSet set;
    set.threshold = t;
    for (Eigen::Index y = 0; y < rough.rows(); ++y)
        for (Eigen::Index x = 0; x < rough.cols(); ++x) {
            const double g = static_cast<double>(rough(y, x)) / peak;
            if (g >= t && g > 0.0) set.pixels.push_back({static_cast<int>(x), static_cast<int>(y), g});
        }
    return set;
}

template <typename Scalar>
ThresholdedSet threshold_filter(const ReconImage<Scalar>& rough, double t) {
    return threshold_filter(rough.values, t);
}

/// Intensity-weighted centroid: W = g / sum g, (x_c, y_c) = sum (x, y) * W.
inline PositionEstimate centroid(const ThresholdedSet& set) {
    if (set.pixels.empty()) throw DegenerateImageError("thresholded pixel set is empty");
    double total = 0.0;
    for (const auto& p : set.pixels) total += p.g;
    if (!(total > 0.0)) throw DegenerateImageError("thresholded pixel weights sum to zero");

    PositionEstimate est;
    for (const auto& p : set.pixels) {
        const double w = p.g / total;
        est.x += p.x * w;
        est.y += p.y * w;
    }
    est.support_size = set.pixels.size();
    return est;
}

template <typename Derived>
PositionEstimate localize(const Eigen::MatrixBase<Derived>& rough, double t) {
    return centroid(threshold_filter(rough, t));
}

template <typename Scalar>
PositionEstimate localize(const ReconImage<Scalar>& rough, double t) {
    return localize(rough.values, t);
}

/// Position of the brightest pixel (first in row-major order on ties).
template <typename Derived>
PositionEstimate argmax_estimate(const Eigen::MatrixBase<Derived>& rough) {
    if (rough.size() == 0) throw UsageError("rough image is empty");
    Eigen::Index row = 0, col = 0;
    rough.maxCoeff(&row, &col);
    return {static_cast<double>(col), static_cast<double>(row), 1};
}

}  // namespace ghosttrack
