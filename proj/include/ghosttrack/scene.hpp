#pragma once

#include <filesystem>
#include <vector>

#include "ghosttrack/image.hpp"

namespace ghosttrack {

enum class TargetKind { square, cross, ring, custom };

/// Transmission values in [0, 1] with nonempty support.
using TargetImage = ImageD;

/// Field-of-view sized frame with the target embedded on a zero background.
using SceneFrame = ImageD;

/// Binary glyph of side `size` (>= 3). The ring keeps pixels whose distance
/// from the image center lies in [inner_fraction * R, R], R = (size - 1) / 2.
TargetImage make_target(TargetKind kind, int size, double ring_inner_fraction = 0.6);

/// Loads a P5 bitmap as a target, scaling samples by maxval.
TargetImage load_target_pgm(const std::filesystem::path& path);

/// Throws ConfigError unless values lie in [0, 1] with at least one positive.
void validate_target(const TargetImage& target);

enum class TrajectoryKind { linear, sinusoid, waypoints };

// Positions are top-left corners of the target. For j = 1..segments:
//   linear:    start + velocity * j
//   sinusoid:  start + velocity * j + (0, amplitude * sin(angular_step * j))
//   waypoints: waypoints[j - 1]
// rounded to the nearest pixel, then clamped so the target stays in the FOV.
struct TrajectoryConfig {
    TrajectoryKind kind = TrajectoryKind::sinusoid;
    Point2 start{12.0, 24.0};
    Point2 velocity{1.0, 0.0};
    double amplitude = 10.0;
    double angular_step = 0.2;
    std::vector<GridPosition> waypoints;
    int segments = 20;
    Extent fov{64, 64};
    Extent target{15, 15};

    void validate() const;
};

GridPosition clamp_position(GridPosition pos, Extent fov, Extent target);

/// Position for segment j (1-based); throws UsageError for j outside 1..segments.
GridPosition trajectory_position(const TrajectoryConfig& traj, int j);

std::vector<GridPosition> trajectory(const TrajectoryConfig& traj);

/// Center of a target placed at `pos`: pos + ((w - 1) / 2, (h - 1) / 2).
inline Point2 target_center(GridPosition pos, Extent target) {
    return {pos.x + (target.width - 1) / 2.0, pos.y + (target.height - 1) / 2.0};
}

/// Copies `target` into a zero FOV frame with its top-left at `pos`.
/// Never clips: a footprint leaving the FOV throws OutOfBoundsError.
SceneFrame embed_target(const TargetImage& target, GridPosition pos, Extent fov);

}  // namespace ghosttrack
