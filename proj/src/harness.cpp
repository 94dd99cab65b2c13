#include "ghosttrack/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "ghosttrack/csv.hpp"
#include "ghosttrack/errors.hpp"
#include "ghosttrack/localize.hpp"
#include "ghosttrack/pgm.hpp"
#include "ghosttrack/seed.hpp"

namespace ghosttrack {

namespace {

constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;  // "noise"

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

TrajectoryRecord EpisodeResult::trajectory_record() const {
    TrajectoryRecord rec;
    for (const auto& s : segments) {
        rec.truth.push_back(s.truth);
        rec.estimates.push_back(s.estimate);
    }
    return rec;
}

int EpisodeResult::fallback_count() const {
    return static_cast<int>(std::count_if(segments.begin(), segments.end(),
                                          [](const SegmentRecord& s) { return s.fallback; }));
}

SceneFrame reference_scene(const TargetImage& target, const ShiftPolicy& shift, Extent fov) {
    const Extent te = extent_of(target);
    const GridPosition top_left{
        static_cast<int>(std::lround(shift.reference.x - (te.width - 1) / 2.0)),
        static_cast<int>(std::lround(shift.reference.y - (te.height - 1) / 2.0))};
    return embed_target(target, clamp_position(top_left, fov, te), fov);
}

EpisodeResult run_episode(const ExperimentConfig& cfg, const EpisodeOptions& options) {
    cfg.validate();

    EpisodeResult res;
    res.config = cfg;
    res.shift = cfg.resolved_shift();
    res.target = cfg.build_target();
    validate_target(res.target);

    const Extent fov = cfg.speckle.extent();
    const Extent te = extent_of(res.target);
    const TrajectoryConfig traj = cfg.resolved_trajectory(te);
    const auto k = static_cast<std::size_t>(cfg.samples_per_segment);
    const int r = cfg.segments;

    NoiseConfig noise = cfg.noise;
    noise.seed = derive_seed({cfg.seed, cfg.noise.seed, kNoiseStream});

    CompensatedAccumulator<double> accumulator;
    RunningCorrelation<double> compensated_global(fov.height, fov.width);
    RunningCorrelation<double> uncompensated(fov.height, fov.width);
    res.buckets.resize(static_cast<Eigen::Index>(cfg.total_samples()));

    double rough_psnr_sum = 0.0;
    int rough_psnr_count = 0;

    for (int j = 1; j <= r; ++j) {
        SegmentRecord seg;
        seg.index = j;
        seg.position = trajectory_position(traj, j);
        seg.truth = target_center(seg.position, te);
        const SceneFrame scene = embed_target(res.target, seg.position, fov);

        // Speckle depends only on (seed, segment), never on earlier estimates.
        const SpeckleStack stack = generate_stack(cfg.speckle, cfg.seed, k, static_cast<std::uint64_t>(j));
        const std::uint64_t first = static_cast<std::uint64_t>(j - 1) * k;
        const BucketSeries y = measure_static(stack, scene, noise, first);
        res.buckets.segment(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(k)) = y;

        const ReconImage<double> rough = correlate(stack.frames, y);

        try {
            const PositionEstimate est = localize(rough, cfg.threshold);
            seg.estimate = est.point();
            seg.support_size = est.support_size;
        } catch (const DegenerateImageError& e) {
            if (!cfg.fallback_argmax) throw DegenerateImageError(e.what(), j);
            const PositionEstimate est = argmax_estimate(rough.values);
            seg.estimate = est.point();
            seg.support_size = est.support_size;
            seg.fallback = true;
        }

        try {
            seg.rough_psnr_db = psnr(rough.values, scene).psnr_db;
            rough_psnr_sum += seg.rough_psnr_db;
            ++rough_psnr_count;
        } catch (const DegenerateImageError&) {
            seg.rough_psnr_db = nan();
        }

        const Point2 center = cfg.compensation == CompensationSource::truth ? seg.truth : seg.estimate;
        std::vector<ImageD> translated;
        translated.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            translated.push_back(translate_frame(stack[i], center, res.shift));
            uncompensated.push(stack[i], y(static_cast<Eigen::Index>(i)));
        }
        if (cfg.mean_mode == MeanMode::global) {
            for (std::size_t i = 0; i < k; ++i)
                compensated_global.push(translated[i], y(static_cast<Eigen::Index>(i)));
        } else {
            accumulator.add(correlate(translated, y));
        }

        if (options.keep_rough_images) res.rough_images.push_back(rough.values);
        res.segments.push_back(seg);
    }

    res.accumulated =
        cfg.mean_mode == MeanMode::global ? compensated_global.result() : accumulator.current();
    res.uncompensated = uncompensated.result();
    res.reference_scene = reference_scene(res.target, res.shift, fov);
    auto quality_of = [&](const ImageD& img) -> QualityReport {
        try {
            return psnr(img, res.reference_scene);
        } catch (const DegenerateImageError&) {
            if (!cfg.fallback_argmax) throw;
            return {nan(), nan()};
        }
    };
    res.accumulated_quality = quality_of(res.accumulated.values);
    res.uncompensated_quality = quality_of(res.uncompensated.values);
    res.mean_rough_psnr_db = rough_psnr_count > 0 ? rough_psnr_sum / rough_psnr_count : nan();
    res.prmse = prmse(res.trajectory_record());
    return res;
}

std::uint64_t trial_seed(std::uint64_t base_seed, double value, int trial) {
    return derive_seed({base_seed, std::bit_cast<std::uint64_t>(value), static_cast<std::uint64_t>(trial)});
}

namespace {

struct TrialOutcome {
    bool ok = false;
    double prmse = 0.0;
    double psnr_db = 0.0;
};

void summarize(const std::vector<double>& xs, double& mean, double& sd) {
    if (xs.empty()) {
        mean = sd = nan();
        return;
    }
    double sum = 0.0;
    for (double x : xs) sum += x;
    mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
}

// Runs every (value, trial) pair on a worker pool; results land at fixed
// indices, so the output never depends on scheduling.
template <typename Configure>
SweepResult run_sweep(const ExperimentConfig& base, std::string parameter, const std::vector<double>& values,
                      int n_trials, Configure configure) {
    base.validate();
    if (n_trials < 1) throw ConfigError("n_trials must be at least 1");
    if (values.empty()) throw ConfigError("sweep grid is empty");

    const std::size_t total = values.size() * static_cast<std::size_t>(n_trials);
    std::vector<TrialOutcome> outcomes(total);
    std::vector<std::exception_ptr> errors(total);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t idx = next++; idx < total; idx = next++) {
            const std::size_t v = idx / static_cast<std::size_t>(n_trials);
            const int trial = static_cast<int>(idx % static_cast<std::size_t>(n_trials));
            ExperimentConfig cfg = base;
            configure(cfg, values[v]);
            cfg.seed = trial_seed(base.seed, values[v], trial);
            try {
                const EpisodeResult ep = run_episode(cfg, {.keep_rough_images = false});
                outcomes[idx] = {true, ep.prmse, ep.accumulated_quality.psnr_db};
            } catch (const DegenerateImageError&) {
                outcomes[idx] = {false, nan(), nan()};
            } catch (...) {
                errors[idx] = std::current_exception();
            }
        }
    };

    unsigned n_threads = base.threads > 0 ? static_cast<unsigned>(base.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, total));
    {
        std::vector<std::jthread> pool;
        for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
        worker();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    SweepResult result;
    result.config = base;
    result.parameter = std::move(parameter);
    for (std::size_t v = 0; v < values.size(); ++v) {
        SweepPoint pt;
        pt.value = values[v];
        std::vector<double> ok_prmse, ok_psnr;
        for (int t = 0; t < n_trials; ++t) {
            const TrialOutcome& o = outcomes[v * static_cast<std::size_t>(n_trials) + static_cast<std::size_t>(t)];
            pt.trial_prmse.push_back(o.prmse);
            pt.trial_psnr_db.push_back(o.psnr_db);
            if (o.ok) {
                ++pt.n_ok;
                ok_prmse.push_back(o.prmse);
                ok_psnr.push_back(o.psnr_db);
            } else {
                ++pt.n_failed;
            }
        }
        summarize(ok_prmse, pt.mean_prmse, pt.std_prmse);
        summarize(ok_psnr, pt.mean_psnr_db, pt.std_psnr_db);
        result.points.push_back(std::move(pt));
    }
    return result;
}

}  // namespace

SweepResult sweep_threshold(const ExperimentConfig& base, std::span<const double> t_values, int n_trials) {
    for (double t : t_values)
        if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("sweep threshold outside [0, 1]");
    ExperimentConfig b = base;
    b.mode = RunMode::sweep_t;
    b.t_values.assign(t_values.begin(), t_values.end());
    b.n_trials = n_trials;
    return run_sweep(b, "t", b.t_values, n_trials,
                     [](ExperimentConfig& cfg, double v) { cfg.threshold = v; });
}

SweepResult sweep_samples(const ExperimentConfig& base, std::span<const int> k_values, int n_trials) {
    for (int k : k_values)
        if (k < 2) throw ConfigError("sweep K must be at least 2");
    ExperimentConfig b = base;
    b.mode = RunMode::sweep_k;
    b.k_values.assign(k_values.begin(), k_values.end());
    b.n_trials = n_trials;
    std::vector<double> values(k_values.begin(), k_values.end());
    return run_sweep(b, "K", values, n_trials,
                     [](ExperimentConfig& cfg, double v) { cfg.samples_per_segment = static_cast<int>(v); });
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing", path);
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.close();
    if (!out) throw IoError("failed writing", path);
}

void make_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory", dir);
}

}  // namespace

void write_grid_csv(const std::filesystem::path& path, const ImageD& img) {
    auto out = open_out(path);
    char buf[40];
    for (Eigen::Index y = 0; y < img.rows(); ++y) {
        for (Eigen::Index x = 0; x < img.cols(); ++x) {
            std::snprintf(buf, sizeof buf, "%.17g", img(y, x));
            out << (x ? "," : "") << buf;
        }
        out << '\n';
    }
    finish(out, path);
}

Manifest render_outputs(const EpisodeResult& result, const std::filesystem::path& dir,
                        const RenderOptions& options) {
    make_dir(dir);
    std::vector<std::string> files;
    auto emit_pgm = [&](const std::string& name, const ImageD& img) {
        write_pgm(dir / name, to_gray8(img));
        files.push_back(name);
    };

    save_config(dir / "config.cfg", result.config);
    files.push_back("config.cfg");

    emit_pgm("original.pgm", result.reference_scene);
    emit_pgm("uncompensated.pgm", result.uncompensated.values);
    for (std::size_t j = 0; j < result.rough_images.size(); ++j)
        emit_pgm("rough_" + std::to_string(j + 1) + ".pgm", result.rough_images[j]);
    emit_pgm("accumulated.pgm", result.accumulated.values);

    {
        const auto path = dir / "trajectory.csv";
        auto out = open_out(path);
        out << "segment,true_x,true_y,est_x,est_y\n";
        for (const auto& s : result.segments)
            out << s.index << ',' << format_real(s.truth.x) << ',' << format_real(s.truth.y) << ','
                << format_real(s.estimate.x) << ',' << format_real(s.estimate.y) << '\n';
        finish(out, path);
        files.push_back("trajectory.csv");
    }
    {
        const auto path = dir / "metrics.csv";
        auto out = open_out(path);
        out << "metric,value\n"
            << "prmse," << format_real(result.prmse) << '\n'
            << "accumulated_psnr_db," << format_real(result.accumulated_quality.psnr_db) << '\n'
            << "accumulated_mse," << format_real(result.accumulated_quality.mse) << '\n'
            << "mean_rough_psnr_db," << format_real(result.mean_rough_psnr_db) << '\n'
            << "uncompensated_psnr_db," << format_real(result.uncompensated_quality.psnr_db) << '\n'
            << "uncompensated_mse," << format_real(result.uncompensated_quality.mse) << '\n'
            << "segments," << result.segments.size() << '\n'
            << "samples_per_segment," << result.config.samples_per_segment << '\n'
            << "total_samples," << result.accumulated.sample_count << '\n'
            << "fallback_segments," << result.fallback_count() << '\n';
        finish(out, path);
        files.push_back("metrics.csv");
    }

    if (options.export_buckets) {
        const auto path = dir / "buckets.csv";
        auto out = open_out(path);
        write_bucket_csv(out, result.buckets);
        finish(out, path);
        files.push_back("buckets.csv");
    }
    if (options.speckle_frames > 0) {
        const SpeckleStack stack = generate_stack(result.config.speckle, result.config.seed,
                                                  static_cast<std::size_t>(options.speckle_frames), 1);
        for (std::size_t i = 0; i < stack.size(); ++i) {
            const std::string name = "speckle_" + std::to_string(i + 1) + ".pgm";
            write_speckle_pgm(dir / name, stack[i], result.config.speckle);
            files.push_back(name);
        }
    }
    if (options.raw_grids) {
        write_grid_csv(dir / "accumulated.csv", result.accumulated.values);
        write_grid_csv(dir / "uncompensated.csv", result.uncompensated.values);
        files.push_back("accumulated.csv");
        files.push_back("uncompensated.csv");
    }

    return write_manifest(dir, files);
}

Manifest render_outputs(const SweepResult& result, const std::filesystem::path& dir) {
    make_dir(dir);
    save_config(dir / "config.cfg", result.config);

    const auto path = dir / "sweep.csv";
    auto out = open_out(path);
    out << "param,mean_prmse,std_prmse,n_ok,n_failed\n";
    for (const auto& p : result.points)
        out << format_real(p.value) << ',' << format_real(p.mean_prmse) << ',' << format_real(p.std_prmse)
            << ',' << p.n_ok << ',' << p.n_failed << '\n';
    finish(out, path);

    return write_manifest(dir, {"config.cfg", "sweep.csv"});
}

}  // namespace ghosttrack
