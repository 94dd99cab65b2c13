#include <sstream>

#include "doctest.h"
#include "ghosttrack/config.hpp"
#include "ghosttrack/errors.hpp"

using namespace ghosttrack;

TEST_CASE("config: defaults describe the reference experiment") {
    ExperimentConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.speckle.extent() == Extent{64, 64});
    CHECK(cfg.speckle.macro_pixel == 2);
    CHECK(cfg.target_size == 15);
    CHECK(cfg.samples_per_segment == 300);
    CHECK(cfg.threshold == 0.7);
    CHECK(cfg.total_samples() == 6000);
    CHECK(cfg.resolved_shift().reference == GridPosition{32, 32});
}

TEST_CASE("config: write then parse reproduces every key") {
    ExperimentConfig cfg;
    cfg.seed = 18446744073709551615ULL;
    cfg.threshold = 0.1 + 0.2;  // not exactly representable in short form
    cfg.trajectory.kind = TrajectoryKind::waypoints;
    cfg.trajectory.waypoints = {{1, 2}, {3, 4}};
    cfg.auto_reference = false;
    cfg.shift.reference = {10, 20};
    cfg.t_values = {0.25, 0.75};
    cfg.k_values = {10, 20};
    cfg.mean_mode = MeanMode::global;
    cfg.fallback_argmax = true;

    std::stringstream a;
    write_config(a, cfg);
    ExperimentConfig back;
    std::stringstream in(a.str());
    parse_config(in, back);
    std::stringstream b;
    write_config(b, back);
    CHECK(a.str() == b.str());
    CHECK(back.threshold == cfg.threshold);
    CHECK(back.seed == cfg.seed);
    CHECK(back.trajectory.waypoints == cfg.trajectory.waypoints);
    CHECK(back.resolved_shift().reference == GridPosition{10, 20});
}

TEST_CASE("config: comments, blanks and overrides") {
    std::stringstream in("# header\n\nK = 50   # short segments\n r=3\nt=0.5\ntrajectory = linear\n");
    ExperimentConfig cfg;
    parse_config(in, cfg);
    CHECK(cfg.samples_per_segment == 50);
    CHECK(cfg.segments == 3);
    CHECK(cfg.threshold == 0.5);
    CHECK(cfg.trajectory.kind == TrajectoryKind::linear);
    apply_setting(cfg, "reference_x", "auto");
    CHECK(cfg.auto_reference);
}

TEST_CASE("config: rejects bad keys and values") {
    ExperimentConfig cfg;
    CHECK_THROWS_AS(apply_setting(cfg, "nope", "1"), ConfigError);
    CHECK_THROWS_AS(apply_setting(cfg, "K", "3.5"), ConfigError);
    CHECK_THROWS_AS(apply_setting(cfg, "t", "abc"), ConfigError);
    CHECK_THROWS_AS(apply_setting(cfg, "seed", "-4"), ConfigError);
    CHECK_THROWS_AS(apply_setting(cfg, "fill", "mirror"), ConfigError);
    CHECK_THROWS_AS(apply_setting(cfg, "fallback_argmax", "maybe"), ConfigError);
    CHECK_THROWS_AS(apply_setting(cfg, "waypoints", "1:2;3"), ConfigError);
    std::stringstream in("K 50\n");
    CHECK_THROWS_AS(parse_config(in, cfg), ConfigError);
}

TEST_CASE("config: validation") {
    auto invalid = [](auto mutate) {
        ExperimentConfig cfg;
        mutate(cfg);
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
    };
    invalid([](ExperimentConfig& c) { c.samples_per_segment = 1; });
    invalid([](ExperimentConfig& c) { c.segments = 0; });
    invalid([](ExperimentConfig& c) { c.threshold = 1.1; });
    invalid([](ExperimentConfig& c) { c.speckle.fov_width = 65; });
    invalid([](ExperimentConfig& c) { c.target_size = 2; });
    invalid([](ExperimentConfig& c) { c.target_kind = TargetKind::custom; });
    invalid([](ExperimentConfig& c) { c.n_trials = 0; });
    invalid([](ExperimentConfig& c) { c.k_values = {1}; });
    invalid([](ExperimentConfig& c) { c.t_values = {-0.1}; });
    invalid([](ExperimentConfig& c) {
        c.auto_reference = false;
        c.shift.reference = {64, 0};
    });
}
