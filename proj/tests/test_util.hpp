#pragma once

#include <cmath>
#include <random>

#include "ghosttrack/image.hpp"

namespace ghosttrack::testing {

inline ImageD random_image(std::mt19937_64& rng, int rows, int cols, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    ImageD img(rows, cols);
    for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] = d(rng);
    return img;
}

inline double max_abs_diff(const ImageD& a, const ImageD& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Pearson correlation of two images' pixel values.
inline double pearson(const ImageD& a, const ImageD& b) {
    const Eigen::ArrayXd x = Eigen::Map<const Eigen::ArrayXd>(a.data(), a.size()) - a.mean();
    const Eigen::ArrayXd y = Eigen::Map<const Eigen::ArrayXd>(b.data(), b.size()) - b.mean();
    return (x * y).sum() / std::sqrt((x * x).sum() * (y * y).sum());
}

}  // namespace ghosttrack::testing
