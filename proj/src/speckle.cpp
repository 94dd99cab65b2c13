#include "ghosttrack/speckle.hpp"

#include <cmath>
#include <random>
#include <string>

#include "ghosttrack/errors.hpp"
#include "ghosttrack/pgm.hpp"
#include "ghosttrack/seed.hpp"

namespace ghosttrack {

void SpeckleConfig::validate() const {
    if (fov_width <= 0 || fov_height <= 0)
        throw ConfigError("speckle field of view must be positive");
    if (macro_pixel <= 0) throw ConfigError("macro_pixel must be positive");
    if (fov_width % macro_pixel != 0 || fov_height % macro_pixel != 0)
        throw ConfigError("field of view " + std::to_string(fov_width) + "x" +
                          std::to_string(fov_height) + " is not divisible by macro_pixel " +
                          std::to_string(macro_pixel));
    if (!(bernoulli_p >= 0.0 && bernoulli_p <= 1.0))
        throw ConfigError("bernoulli_p must lie in [0, 1]");
    if (!(off_value >= 0.0) || !(on_value > off_value) || !std::isfinite(on_value))
        throw ConfigError("speckle levels must satisfy on_value > off_value >= 0");
}

SpeckleStack generate_stack(const SpeckleConfig& cfg, std::uint64_t seed, std::size_t count,
                            std::uint64_t stream) {
    cfg.validate();
    if (count == 0) throw UsageError("speckle stack needs at least one frame");

    const int m = cfg.macro_pixel;
    const int bw = cfg.fov_width / m;
    const int bh = cfg.fov_height / m;

    std::mt19937_64 rng(derive_seed({seed, stream}));

    SpeckleStack stack;
    stack.seed = seed;
    stack.stream = stream;
    stack.frames.reserve(count);

    Image<double> blocks(bh, bw);
    for (std::size_t i = 0; i < count; ++i) {
        for (int by = 0; by < bh; ++by)
            for (int bx = 0; bx < bw; ++bx)
                blocks(by, bx) = uniform01(rng) < cfg.bernoulli_p ? cfg.on_value : cfg.off_value;

        SpeckleFrame frame(cfg.fov_height, cfg.fov_width);
        for (int by = 0; by < bh; ++by)
            for (int bx = 0; bx < bw; ++bx)
                frame.block(by * m, bx * m, m, m).setConstant(blocks(by, bx));
        stack.frames.push_back(std::move(frame));
    }
    return stack;
}

void write_speckle_pgm(const std::filesystem::path& path, const SpeckleFrame& frame,
                       const SpeckleConfig& cfg) {
    const double span = cfg.on_value - cfg.off_value;
    Image8 out = ((frame.array() - cfg.off_value) / span * 255.0)
                     .round()
                     .max(0.0)
                     .min(255.0)
                     .cast<std::uint8_t>()
                     .matrix();
    write_pgm(path, out);
}

}  // namespace ghosttrack
