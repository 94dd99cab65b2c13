#include "ghosttrack/scene.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ghosttrack/errors.hpp"
#include "ghosttrack/pgm.hpp"

namespace ghosttrack {

TargetImage make_target(TargetKind kind, int size, double ring_inner_fraction) {
    if (size < 3) throw ConfigError("target size must be at least 3, got " + std::to_string(size));

    TargetImage img = TargetImage::Zero(size, size);
    switch (kind) {
        case TargetKind::square:
            img.setOnes();
            break;
        case TargetKind::cross: {
            const int mid = size / 2;
            img.row(mid).setOnes();
            img.col(mid).setOnes();
            break;
        }
        case TargetKind::ring: {
            if (!(ring_inner_fraction >= 0.0 && ring_inner_fraction < 1.0))
                throw ConfigError("ring inner fraction must lie in [0, 1)");
            const double c = (size - 1) / 2.0;
            const double outer = c;
            const double inner = ring_inner_fraction * outer;
            for (int y = 0; y < size; ++y)
                for (int x = 0; x < size; ++x) {
                    const double d = std::hypot(x - c, y - c);
                    if (d >= inner && d <= outer) img(y, x) = 1.0;
                }
            break;
        }
        case TargetKind::custom:
            throw ConfigError("custom targets are loaded from a bitmap, not generated");
    }
    return img;
}

void validate_target(const TargetImage& target) {
    if (target.size() == 0) throw ConfigError("target image is empty");
    if (!(target.minCoeff() >= 0.0) || !(target.maxCoeff() <= 1.0))
        throw ConfigError("target transmission must lie in [0, 1]");
    if (!(target.maxCoeff() > 0.0)) throw ConfigError("target has no nonzero pixel");
}

TargetImage load_target_pgm(const std::filesystem::path& path) {
    const PgmImage pgm = read_pgm(path);
    TargetImage img = pgm.pixels.cast<double>() / static_cast<double>(pgm.maxval);
    validate_target(img);
    return img;
}

void TrajectoryConfig::validate() const {
    if (segments < 1) throw ConfigError("trajectory needs at least one segment");
    if (target.width > fov.width || target.height > fov.height)
        throw ConfigError("target does not fit inside the field of view");
    if (kind == TrajectoryKind::waypoints && static_cast<int>(waypoints.size()) < segments)
        throw ConfigError("waypoint list has " + std::to_string(waypoints.size()) +
                          " entries for " + std::to_string(segments) + " segments");
    if (!std::isfinite(start.x) || !std::isfinite(start.y) || !std::isfinite(velocity.x) ||
        !std::isfinite(velocity.y) || !std::isfinite(amplitude) || !std::isfinite(angular_step))
        throw ConfigError("trajectory parameters must be finite");
}

GridPosition clamp_position(GridPosition pos, Extent fov, Extent target) {
    return {std::clamp(pos.x, 0, fov.width - target.width),
            std::clamp(pos.y, 0, fov.height - target.height)};
}

GridPosition trajectory_position(const TrajectoryConfig& traj, int j) {
    traj.validate();
    if (j < 1 || j > traj.segments)
        throw UsageError("segment index " + std::to_string(j) + " outside 1.." +
                         std::to_string(traj.segments));

    GridPosition raw;
    switch (traj.kind) {
        case TrajectoryKind::linear:
            raw = {static_cast<int>(std::lround(traj.start.x + traj.velocity.x * j)),
                   static_cast<int>(std::lround(traj.start.y + traj.velocity.y * j))};
            break;
        case TrajectoryKind::sinusoid:
            raw = {static_cast<int>(std::lround(traj.start.x + traj.velocity.x * j)),
                   static_cast<int>(std::lround(traj.start.y + traj.velocity.y * j +
                                                traj.amplitude * std::sin(traj.angular_step * j)))};
            break;
        case TrajectoryKind::waypoints:
            raw = traj.waypoints[static_cast<std::size_t>(j - 1)];
            break;
    }
    return clamp_position(raw, traj.fov, traj.target);
}

std::vector<GridPosition> trajectory(const TrajectoryConfig& traj) {
    std::vector<GridPosition> out;
    out.reserve(static_cast<std::size_t>(std::max(traj.segments, 0)));
    for (int j = 1; j <= traj.segments; ++j) out.push_back(trajectory_position(traj, j));
    return out;
}

SceneFrame embed_target(const TargetImage& target, GridPosition pos, Extent fov) {
    const int tw = static_cast<int>(target.cols());
    const int th = static_cast<int>(target.rows());
    if (pos.x < 0 || pos.y < 0 || pos.x + tw > fov.width || pos.y + th > fov.height)
        throw OutOfBoundsError("target " + std::to_string(tw) + "x" + std::to_string(th) +
                               " at (" + std::to_string(pos.x) + "," + std::to_string(pos.y) +
                               ") leaves the " + std::to_string(fov.width) + "x" +
                               std::to_string(fov.height) + " field of view");
    SceneFrame scene = SceneFrame::Zero(fov.height, fov.width);
    scene.block(pos.y, pos.x, th, tw) = target;
    return scene;
}

}  // namespace ghosttrack
