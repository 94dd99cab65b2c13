#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghosttrack/errors.hpp"
#include "ghosttrack/image.hpp"

namespace ghosttrack {

/// Correlation image. Values are unnormalized and may be negative.
template <typename Scalar>
struct ReconImage {
    Image<Scalar> values;
    std::size_t sample_count = 0;
};

/// Second-order correlation of reference frames with bucket values:
///
///   O(x,y) = 1/K sum_i (I_i(x,y) - <I(x,y)>) (y_i - <y>)
///
/// with both means taken over the K supplied samples.
template <typename FrameRange, typename Derived>
ReconImage<typename Derived::Scalar> correlate(const FrameRange& frames,
                                               const Eigen::MatrixBase<Derived>& buckets) {
    using Scalar = typename Derived::Scalar;
    const auto k = static_cast<std::size_t>(std::distance(std::begin(frames), std::end(frames)));
    if (k == 0) throw UsageError("correlation needs at least one sample");
    if (static_cast<Eigen::Index>(k) != buckets.size())
        throw UsageError("frame count " + std::to_string(k) + " differs from bucket count " +
                         std::to_string(buckets.size()));

    const auto& first = *std::begin(frames);
    Image<Scalar> mean_frame = Image<Scalar>::Zero(first.rows(), first.cols());
    for (const auto& f : frames) {
        if (f.rows() != first.rows() || f.cols() != first.cols())
            throw UsageError("speckle frames differ in size");
        mean_frame += f;
    }
    mean_frame /= static_cast<Scalar>(k);
    const Scalar mean_y = buckets.mean();

    Image<Scalar> out = Image<Scalar>::Zero(first.rows(), first.cols());
    Eigen::Index i = 0;
    for (const auto& f : frames) out += (f - mean_frame) * (buckets(i++) - mean_y);
    out /= static_cast<Scalar>(k);
    return {std::move(out), k};
}

/// Streaming form of `correlate` (Welford co-moment update). Agrees with the
/// two-pass result up to rounding; used when the frames are not kept.
template <typename Scalar>
class RunningCorrelation {
public:
    RunningCorrelation(Eigen::Index rows, Eigen::Index cols)
        : mean_frame_(Image<Scalar>::Zero(rows, cols)), comoment_(Image<Scalar>::Zero(rows, cols)) {}

    template <typename Derived>
    void push(const Eigen::MatrixBase<Derived>& frame, Scalar y) {
        if (frame.rows() != mean_frame_.rows() || frame.cols() != mean_frame_.cols())
            throw UsageError("speckle frame size differs from accumulator");
        ++count_;
        const Scalar n = static_cast<Scalar>(count_);
        const Scalar dy = y - mean_y_;
        mean_y_ += dy / n;
        mean_frame_ += (frame - mean_frame_) / n;
        comoment_ += (frame - mean_frame_) * dy;
    }

    std::size_t count() const { return count_; }

    ReconImage<Scalar> result() const {
        if (count_ == 0) throw UsageError("correlation needs at least one sample");
        return {comoment_ / static_cast<Scalar>(count_), count_};
    }

private:
    std::size_t count_ = 0;
    Scalar mean_y_ = 0;
    Image<Scalar> mean_frame_;
    Image<Scalar> comoment_;
};

enum class FillMode { zero, wrap };

/// `toward_reference` moves content at the estimated center onto the
/// reference point. `literal` shifts content by +round(center) instead.
enum class ShiftConvention { toward_reference, literal };

struct ShiftPolicy {
    FillMode fill = FillMode::zero;
    GridPosition reference{32, 32};
    ShiftConvention convention = ShiftConvention::toward_reference;
};

/// Integer shift applied to speckle frames for a given center estimate.
inline GridPosition shift_vector(Point2 center, const ShiftPolicy& policy) {
    if (!std::isfinite(center.x) || !std::isfinite(center.y))
        throw UsageError("estimated center must be finite");
    if (policy.convention == ShiftConvention::literal)
        return {static_cast<int>(std::lround(center.x)), static_cast<int>(std::lround(center.y))};
    return {static_cast<int>(std::lround(policy.reference.x - center.x)),
            static_cast<int>(std::lround(policy.reference.y - center.y))};
}

/// out(y + dy, x + dx) = in(y, x). Vacated pixels are zero or wrapped.
template <typename Derived>
Image<typename Derived::Scalar> shift_image(const Eigen::MatrixBase<Derived>& in, int dx, int dy,
                                            FillMode fill) {
    using Scalar = typename Derived::Scalar;
    const auto rows = static_cast<int>(in.rows());
    const auto cols = static_cast<int>(in.cols());
    Image<Scalar> out = Image<Scalar>::Zero(rows, cols);
    if (rows == 0 || cols == 0) return out;

    if (fill == FillMode::wrap) {
        const int sx = ((dx % cols) + cols) % cols;
        const int sy = ((dy % rows) + rows) % rows;
        for (int y = 0; y < rows; ++y)
            for (int x = 0; x < cols; ++x) out((y + sy) % rows, (x + sx) % cols) = in(y, x);
        return out;
    }

    const int x0 = std::max(0, -dx), x1 = std::min(cols, cols - dx);
    const int y0 = std::max(0, -dy), y1 = std::min(rows, rows - dy);
    if (x0 < x1 && y0 < y1)
        out.block(y0 + dy, x0 + dx, y1 - y0, x1 - x0) = in.block(y0, x0, y1 - y0, x1 - x0);
    return out;
}

template <typename Derived>
Image<typename Derived::Scalar> translate_frame(const Eigen::MatrixBase<Derived>& frame,
                                                Point2 estimated_center, const ShiftPolicy& policy) {
    const GridPosition d = shift_vector(estimated_center, policy);
    return shift_image(frame, d.x, d.y, policy.fill);
}

/// Running mean of rough images; sample_count sums the contributors.
template <typename Scalar>
class CompensatedAccumulator {
public:
    void add(const ReconImage<Scalar>& rough) {
        if (segments_ == 0) {
            sum_ = rough.values;
        } else {
            if (rough.values.rows() != sum_.rows() || rough.values.cols() != sum_.cols())
                throw UsageError("rough image size differs from accumulator");
            sum_ += rough.values;
        }
        ++segments_;
        samples_ += rough.sample_count;
    }

    std::size_t segments() const { return segments_; }

    ReconImage<Scalar> current() const {
        if (segments_ == 0) throw UsageError("no rough images accumulated");
        return {sum_ / static_cast<Scalar>(segments_), samples_};
    }

private:
    Image<Scalar> sum_;
    std::size_t segments_ = 0;
    std::size_t samples_ = 0;
};

/// Whether the compensated correlation centers each segment on its own
/// means (the average of rough images) or on means over all N samples.
enum class MeanMode { per_segment, global };

/// Compensated reconstruction over N = r*K frames, segment j translated by
/// centers[j]. In per_segment mode the result is computed both as the mean of
/// r rough images and as one pass over all N frames with segment-local
/// centering; the two must agree to 1e-9 relative.
template <typename FrameRange, typename Derived>
ReconImage<typename Derived::Scalar> reconstruct_compensated(
    const FrameRange& stack, const Eigen::MatrixBase<Derived>& buckets, std::span<const Point2> centers,
    std::size_t samples_per_segment, const ShiftPolicy& policy,
    MeanMode mode = MeanMode::per_segment) {
    using Scalar = typename Derived::Scalar;
    const auto n = static_cast<std::size_t>(std::distance(std::begin(stack), std::end(stack)));
    const std::size_t k = samples_per_segment;
    const std::size_t r = centers.size();
    if (k == 0 || r == 0 || n != r * k)
        throw UsageError("stack length " + std::to_string(n) + " is not segments (" +
                         std::to_string(r) + ") x samples per segment (" + std::to_string(k) + ")");
    if (static_cast<Eigen::Index>(n) != buckets.size())
        throw UsageError("bucket count differs from stack length");

    std::vector<Image<Scalar>> translated;
    translated.reserve(n);
    {
        std::size_t i = 0;
        for (const auto& f : stack) translated.push_back(translate_frame(f, centers[i++ / k], policy));
    }

    if (mode == MeanMode::global) return correlate(translated, buckets);

    CompensatedAccumulator<Scalar> acc;
    for (std::size_t j = 0; j < r; ++j) {
        const std::span<const Image<Scalar>> seg(translated.data() + j * k, k);
        acc.add(correlate(seg, buckets.segment(static_cast<Eigen::Index>(j * k), static_cast<Eigen::Index>(k))));
    }
    ReconImage<Scalar> averaged = acc.current();

    // One pass over all N samples, centered per segment.
    Image<Scalar> pooled = Image<Scalar>::Zero(averaged.values.rows(), averaged.values.cols());
    for (std::size_t j = 0; j < r; ++j) {
        Image<Scalar> mean_frame = Image<Scalar>::Zero(pooled.rows(), pooled.cols());
        for (std::size_t i = j * k; i < (j + 1) * k; ++i) mean_frame += translated[i];
        mean_frame /= static_cast<Scalar>(k);
        const Scalar mean_y =
            buckets.segment(static_cast<Eigen::Index>(j * k), static_cast<Eigen::Index>(k)).mean();
        for (std::size_t i = j * k; i < (j + 1) * k; ++i)
            pooled += (translated[i] - mean_frame) * (buckets(static_cast<Eigen::Index>(i)) - mean_y);
    }
    pooled /= static_cast<Scalar>(n);

    const Scalar scale =
        std::max(averaged.values.cwiseAbs().maxCoeff(), std::numeric_limits<Scalar>::min());
    const Scalar rel_tol = std::max(Scalar(1e-9), 256 * std::numeric_limits<Scalar>::epsilon());
    if ((pooled - averaged.values).cwiseAbs().maxCoeff() > rel_tol * scale)
        throw std::logic_error("segment-averaged and pooled compensated reconstructions disagree");
    return averaged;
}

}  // namespace ghosttrack
