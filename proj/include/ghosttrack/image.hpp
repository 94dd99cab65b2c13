#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace ghosttrack {

// Images are row-major: img(y, x), x indexes columns, origin top-left.
template <typename Scalar>
using Image = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Series = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ImageD = Image<double>;
using Image8 = Image<std::uint8_t>;

struct Extent {
    int width = 0;
    int height = 0;

    friend bool operator==(const Extent&, const Extent&) = default;
};

/// Integer pixel position (top-left corner for embedded targets).
struct GridPosition {
    int x = 0;
    int y = 0;

    friend bool operator==(const GridPosition&, const GridPosition&) = default;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

template <typename Derived>
Extent extent_of(const Eigen::MatrixBase<Derived>& img) {
    return {static_cast<int>(img.cols()), static_cast<int>(img.rows())};
}

}  // namespace ghosttrack
