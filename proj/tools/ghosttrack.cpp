// ghosttrack: moving-target ghost imaging simulator.
//
//   ghosttrack simulate [--config FILE] [--<key> VALUE ...]
//   ghosttrack sweep-t  [--config FILE] [--<key> VALUE ...]
//   ghosttrack sweep-k  [--config FILE] [--<key> VALUE ...]
//   ghosttrack render   --config FILE [--<key> VALUE ...]
//
// Exit codes: 0 success, 1 configuration error, 2 degenerate-signal abort, 3 I/O error.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "ghosttrack/config.hpp"
#include "ghosttrack/csv.hpp"
#include "ghosttrack/errors.hpp"
#include "ghosttrack/harness.hpp"

using namespace ghosttrack;

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kDegenerate = 2, kIo = 3 };

struct CommandArgs {
    std::string config_path;
    std::map<std::string, std::string> overrides;
    RenderOptions render;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommandArgs& args, bool config_required) {
    auto* opt = cmd->add_option("--config", args.config_path, "key = value configuration file");
    if (config_required) opt->required();
    for (const auto& f : config_fields()) {
        cmd->add_option_function<std::string>(
            "--" + f.key, [&args, key = f.key](const std::string& v) { args.overrides[key] = v; }, f.help);
    }
    cmd->add_flag("--quiet", args.quiet, "suppress the summary on stdout");
}

void add_render_flags(CLI::App* cmd, CommandArgs& args) {
    cmd->add_flag("--export-buckets", args.render.export_buckets, "write buckets.csv");
    cmd->add_option("--dump-speckle", args.render.speckle_frames, "write the first N speckle frames of segment 1")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--raw-grids", args.render.raw_grids, "write raw reconstruction values as CSV grids");
}

ExperimentConfig resolve(const CommandArgs& args) {
    ExperimentConfig cfg;
    if (!args.config_path.empty()) cfg = load_config(args.config_path);
    for (const auto& [k, v] : args.overrides) apply_setting(cfg, k, v);
    cfg.validate();
    return cfg;
}

void print_episode(const EpisodeResult& ep, const Manifest& m) {
    std::printf("segment  true_x  true_y   est_x   est_y  rough_psnr_db%s\n", ep.fallback_count() ? "  fallback" : "");
    for (const auto& s : ep.segments)
        std::printf("%7d %7.2f %7.2f %7.3f %7.3f %14.3f%s\n", s.index, s.truth.x, s.truth.y, s.estimate.x,
                    s.estimate.y, s.rough_psnr_db, s.fallback ? "  yes" : "");
    std::printf("prmse                  %s px\n", format_real(ep.prmse).c_str());
    std::printf("mean rough psnr        %s dB\n", format_real(ep.mean_rough_psnr_db).c_str());
    std::printf("accumulated psnr       %s dB\n", format_real(ep.accumulated_quality.psnr_db).c_str());
    std::printf("uncompensated psnr     %s dB\n", format_real(ep.uncompensated_quality.psnr_db).c_str());
    std::printf("wrote %zu files to %s\n", m.entries.size() + 1, m.directory.string().c_str());
}

void print_sweep(const SweepResult& sw, const Manifest& m) {
    std::printf("%8s %12s %12s %6s %8s\n", sw.parameter.c_str(), "mean_prmse", "std_prmse", "n_ok", "n_failed");
    for (const auto& p : sw.points)
        std::printf("%8s %12s %12s %6d %8d\n", format_real(p.value).c_str(), format_real(p.mean_prmse).c_str(),
                    format_real(p.std_prmse).c_str(), p.n_ok, p.n_failed);
    std::printf("wrote %zu files to %s\n", m.entries.size() + 1, m.directory.string().c_str());
}

int execute(ExperimentConfig cfg, const CommandArgs& args) {
    switch (cfg.mode) {
        case RunMode::simulate: {
            const EpisodeResult ep = run_episode(cfg);
            const Manifest m = render_outputs(ep, cfg.output_dir, args.render);
            if (!args.quiet) print_episode(ep, m);
            break;
        }
        case RunMode::sweep_t: {
            const SweepResult sw = sweep_threshold(cfg, cfg.t_values, cfg.n_trials);
            const Manifest m = render_outputs(sw, cfg.output_dir);
            if (!args.quiet) print_sweep(sw, m);
            break;
        }
        case RunMode::sweep_k: {
            const SweepResult sw = sweep_samples(cfg, cfg.k_values, cfg.n_trials);
            const Manifest m = render_outputs(sw, cfg.output_dir);
            if (!args.quiet) print_sweep(sw, m);
            break;
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moving-target ghost imaging: localization, speckle compensation and accumulation"};
    app.require_subcommand(1);

    CommandArgs sim_args, sweep_t_args, sweep_k_args, render_args;
    auto* sim = app.add_subcommand("simulate", "run one episode and write its images and tables");
    add_common(sim, sim_args, false);
    add_render_flags(sim, sim_args);
    auto* st = app.add_subcommand("sweep-t", "sweep the screening threshold over t_values");
    add_common(st, sweep_t_args, false);
    auto* sk = app.add_subcommand("sweep-k", "sweep samples per segment over k_values");
    add_common(sk, sweep_k_args, false);
    auto* rd = app.add_subcommand("render", "regenerate all outputs from a resolved config.cfg");
    add_common(rd, render_args, true);
    add_render_flags(rd, render_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (sim->parsed()) {
            sim_args.overrides["mode"] = "simulate";
            return execute(resolve(sim_args), sim_args);
        }
        if (st->parsed()) {
            sweep_t_args.overrides["mode"] = "sweep-t";
            return execute(resolve(sweep_t_args), sweep_t_args);
        }
        if (sk->parsed()) {
            sweep_k_args.overrides["mode"] = "sweep-k";
            return execute(resolve(sweep_k_args), sweep_k_args);
        }
        return execute(resolve(render_args), render_args);
    } catch (const DegenerateImageError& e) {
        std::cerr << "ghosttrack: degenerate signal: " << e.what() << '\n';
        return kDegenerate;
    } catch (const IoError& e) {
        std::cerr << "ghosttrack: I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const Error& e) {
        std::cerr << "ghosttrack: configuration error: " << e.what() << '\n';
        return kConfig;
    }
}
