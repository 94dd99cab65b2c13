#include "ghosttrack/forward.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include "ghosttrack/csv.hpp"
#include "ghosttrack/errors.hpp"
#include "ghosttrack/seed.hpp"

namespace ghosttrack {

void NoiseConfig::validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("noise sigma must be >= 0");
}

double bucket_measure(const SpeckleFrame& frame, const SceneFrame& scene, const NoiseConfig& noise,
                      std::uint64_t frame_index) {
    if (frame.rows() != scene.rows() || frame.cols() != scene.cols())
        throw UsageError("speckle frame and scene dimensions differ");
    double value = frame.cwiseProduct(scene).sum();
    if (noise.kind == NoiseKind::gaussian && noise.sigma > 0.0) {
        std::mt19937_64 rng(derive_seed({noise.seed, frame_index}));
        std::normal_distribution<double> dist(0.0, noise.sigma);
        value += dist(rng);
    }
    return value;
}

BucketSeries measure_series(const SpeckleStack& stack, std::span<const SceneFrame> scenes,
                            const NoiseConfig& noise, std::uint64_t first_index) {
    if (scenes.size() != stack.size())
        throw UsageError("scene sequence length " + std::to_string(scenes.size()) +
                         " differs from speckle stack length " + std::to_string(stack.size()));
    noise.validate();
    BucketSeries out(static_cast<Eigen::Index>(stack.size()));
    for (std::size_t i = 0; i < stack.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = bucket_measure(stack[i], scenes[i], noise, first_index + i);
    return out;
}

BucketSeries measure_static(const SpeckleStack& stack, const SceneFrame& scene,
                            const NoiseConfig& noise, std::uint64_t first_index) {
    noise.validate();
    BucketSeries out(static_cast<Eigen::Index>(stack.size()));
    for (std::size_t i = 0; i < stack.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = bucket_measure(stack[i], scene, noise, first_index + i);
    return out;
}

void write_bucket_csv(std::ostream& out, const BucketSeries& buckets) {
    out << "y\n";
    for (Eigen::Index i = 0; i < buckets.size(); ++i) out << format_real(buckets(i)) << '\n';
}

}  // namespace ghosttrack
