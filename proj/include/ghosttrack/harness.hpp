#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ghosttrack/config.hpp"
#include "ghosttrack/forward.hpp"
#include "ghosttrack/manifest.hpp"
#include "ghosttrack/metrics.hpp"
#include "ghosttrack/reconstruct.hpp"

namespace ghosttrack {

struct SegmentRecord {
    int index = 0;            // 1-based
    GridPosition position;    // simulated top-left
    Point2 truth;             // simulated target center
    Point2 estimate;          // localized center
    std::size_t support_size = 0;
    double rough_psnr_db = 0.0;  // NaN if the rough image was constant
    bool fallback = false;       // estimate came from the argmax pixel
};

struct EpisodeResult {
    ExperimentConfig config;
    ShiftPolicy shift;
    TargetImage target;
    std::vector<SegmentRecord> segments;
    std::vector<ImageD> rough_images;  // empty unless kept
    ReconImage<double> accumulated;
    ReconImage<double> uncompensated;
    SceneFrame reference_scene;  // target embedded at the reference point
    QualityReport accumulated_quality;
    QualityReport uncompensated_quality;
    double mean_rough_psnr_db = 0.0;
    double prmse = 0.0;
    BucketSeries buckets;  // all N samples in order

    TrajectoryRecord trajectory_record() const;
    int fallback_count() const;
};

struct EpisodeOptions {
    bool keep_rough_images = true;
};

/// Runs r segments: speckle, bucket measurement, rough correlation,
/// localization, speckle translation and accumulation, plus the
/// uncompensated correlation over all N samples. Deterministic in cfg.
/// A segment without positive correlation throws DegenerateImageError
/// carrying its index, unless cfg.fallback_argmax is set.
EpisodeResult run_episode(const ExperimentConfig& cfg, const EpisodeOptions& options = {});

/// Target embedded so that its center sits on the shift reference point.
SceneFrame reference_scene(const TargetImage& target, const ShiftPolicy& shift, Extent fov);

struct SweepPoint {
    double value = 0.0;
    double mean_prmse = 0.0;
    double std_prmse = 0.0;
    double mean_psnr_db = 0.0;
    double std_psnr_db = 0.0;
    int n_ok = 0;
    int n_failed = 0;
    std::vector<double> trial_prmse;    // NaN for failed trials
    std::vector<double> trial_psnr_db;  // accumulated PSNR, NaN for failed trials
};

struct SweepResult {
    ExperimentConfig config;
    std::string parameter;  // "t" or "K"
    std::vector<SweepPoint> points;
};

/// Trial seed as a hash of (base seed, swept value, trial index), so grid
/// points and trial counts can grow without disturbing existing trials.
std::uint64_t trial_seed(std::uint64_t base_seed, double value, int trial);

SweepResult sweep_threshold(const ExperimentConfig& base, std::span<const double> t_values, int n_trials);
SweepResult sweep_samples(const ExperimentConfig& base, std::span<const int> k_values, int n_trials);

struct RenderOptions {
    bool export_buckets = false;  // buckets.csv
    int speckle_frames = 0;       // speckle_<i>.pgm from segment 1
    bool raw_grids = false;       // accumulated.csv, uncompensated.csv at full precision
};

/// Writes config.cfg, original.pgm, uncompensated.pgm, rough_<j>.pgm,
/// accumulated.pgm, trajectory.csv, metrics.csv (plus optional extras) and
/// manifest.txt. Throws IoError naming the offending path.
Manifest render_outputs(const EpisodeResult& result, const std::filesystem::path& dir,
                        const RenderOptions& options = {});

/// Writes config.cfg, sweep.csv and manifest.txt.
Manifest render_outputs(const SweepResult& result, const std::filesystem::path& dir);

/// Raw image values as a comma-separated grid, one row per line, 17 digits.
void write_grid_csv(const std::filesystem::path& path, const ImageD& img);

}  // namespace ghosttrack
