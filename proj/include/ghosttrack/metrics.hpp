#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ghosttrack/errors.hpp"
#include "ghosttrack/image.hpp"

namespace ghosttrack {

struct TrajectoryRecord {
    std::vector<Point2> truth;
    std::vector<Point2> estimates;
};

/// Mean per-segment Euclidean error between true and estimated centers.
/// The average sits outside the square root, so this is not a true RMS.
inline double prmse(const TrajectoryRecord& rec) {
    if (rec.truth.empty()) throw UsageError("trajectory record is empty");
    if (rec.truth.size() != rec.estimates.size())
        throw UsageError("truth has " + std::to_string(rec.truth.size()) + " positions, estimates " +
                         std::to_string(rec.estimates.size()));
    double sum = 0.0;
    for (std::size_t j = 0; j < rec.truth.size(); ++j)
        sum += std::hypot(rec.truth[j].x - rec.estimates[j].x, rec.truth[j].y - rec.estimates[j].y);
    return sum / static_cast<double>(rec.truth.size());
}

struct QualityReport {
    double mse = 0.0;
    double psnr_db = std::numeric_limits<double>::infinity();

    bool infinite() const { return std::isinf(psnr_db); }
};

/// Maps an image linearly onto [0, 1]. Throws DegenerateImageError if constant.
template <typename Derived>
ImageD min_max_normalize(const Eigen::MatrixBase<Derived>& img) {
    const ImageD d = img.template cast<double>();
    const double lo = d.minCoeff();
    const double hi = d.maxCoeff();
    if (!(hi > lo)) throw DegenerateImageError("cannot normalize a constant image");
    return ((d.array() - lo) / (hi - lo)).matrix();
}

/// MSE and peak-1 PSNR of two images already on a [0, 1] scale.
template <typename DerivedA, typename DerivedB>
QualityReport quality(const Eigen::MatrixBase<DerivedA>& normalized_recon,
                      const Eigen::MatrixBase<DerivedB>& normalized_original) {
    if (normalized_recon.rows() != normalized_original.rows() ||
        normalized_recon.cols() != normalized_original.cols())
        throw UsageError("image dimensions differ");
    QualityReport q;
    q.mse = (normalized_recon.template cast<double>() - normalized_original.template cast<double>())
                .squaredNorm() /
            static_cast<double>(normalized_recon.size());
    q.psnr_db = q.mse > 0.0 ? 20.0 * std::log10(1.0 / std::sqrt(q.mse))
                            : std::numeric_limits<double>::infinity();
    return q;
}

/// Min-max normalizes the reconstruction (and the original, unless it is
/// constant) before computing MSE and PSNR.
template <typename DerivedA, typename DerivedB>
QualityReport psnr(const Eigen::MatrixBase<DerivedA>& recon, const Eigen::MatrixBase<DerivedB>& original) {
    if (recon.rows() != original.rows() || recon.cols() != original.cols())
        throw UsageError("image dimensions differ");
    const ImageD r = min_max_normalize(recon);
    const ImageD o_raw = original.template cast<double>();
    const ImageD o = o_raw.maxCoeff() > o_raw.minCoeff() ? min_max_normalize(o_raw) : o_raw;
    return quality(r, o);
}

}  // namespace ghosttrack
