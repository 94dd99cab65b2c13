#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ghosttrack/forward.hpp"
#include "ghosttrack/reconstruct.hpp"
#include "ghosttrack/scene.hpp"
#include "ghosttrack/speckle.hpp"

namespace ghosttrack {

/// Which center each segment's speckle is translated by: the localized
/// estimate, or the simulated truth (an upper bound on compensation quality).
enum class CompensationSource { estimate, truth };

enum class RunMode { simulate, sweep_t, sweep_k };

struct ExperimentConfig {
    SpeckleConfig speckle;

    TargetKind target_kind = TargetKind::square;
    int target_size = 15;
    double ring_inner_fraction = 0.6;
    std::filesystem::path target_path;

    // segments, fov and target extents are filled in by resolved_trajectory()
    TrajectoryConfig trajectory;

    int samples_per_segment = 300;  // K
    int segments = 20;              // r
    double threshold = 0.7;         // t

    NoiseConfig noise;

    ShiftPolicy shift;
    bool auto_reference = true;  // reference point = FOV center

    MeanMode mean_mode = MeanMode::per_segment;
    CompensationSource compensation = CompensationSource::estimate;
    bool fallback_argmax = false;

    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "ghosttrack-out";

    RunMode mode = RunMode::simulate;
    std::vector<double> t_values{0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<int> k_values{50, 100, 200, 300, 500};
    int n_trials = 10;
    int threads = 0;  // 0 = hardware concurrency; never affects results

    std::uint64_t total_samples() const {
        return static_cast<std::uint64_t>(samples_per_segment) * static_cast<std::uint64_t>(segments);
    }

    /// Throws ConfigError on any invalid field.
    void validate() const;

    /// Generated glyph or loaded bitmap.
    TargetImage build_target() const;

    TrajectoryConfig resolved_trajectory(Extent target) const;
    ShiftPolicy resolved_shift() const;
};

/// One key of the flat key = value config schema.
struct ConfigField {
    std::string key;
    std::string help;
    std::function<std::string(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, const std::string&)> set;
};

const std::vector<ConfigField>& config_fields();

/// Sets one key; throws ConfigError for unknown keys or unparsable values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Parses `key = value` lines onto `cfg`. Blank lines and '#' comments are skipped.
void parse_config(std::istream& in, ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Writes every key. Reals use 17 significant digits so a reload is exact.
void write_config(std::ostream& out, const ExperimentConfig& cfg);
void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg);

std::string to_string(RunMode mode);

}  // namespace ghosttrack
