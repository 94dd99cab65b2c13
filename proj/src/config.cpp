#include "ghosttrack/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "ghosttrack/errors.hpp"

namespace ghosttrack {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_real(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a real number, got '" + v + "'");
    }
}

long long to_integer(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long long i = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    const long long i = to_integer(key, v);
    if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max())
        throw ConfigError(key + ": integer out of range");
    return static_cast<int>(i);
}

std::uint64_t to_seed(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
        const unsigned long long s = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return s;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

template <typename Enum>
Enum to_enum(const std::string& key, const std::string& v,
             const std::vector<std::pair<std::string, Enum>>& names) {
    for (const auto& [name, e] : names)
        if (name == v) return e;
    std::string choices;
    for (const auto& [name, e] : names) choices += (choices.empty() ? "" : "|") + name;
    throw ConfigError(key + ": expected one of " + choices + ", got '" + v + "'");
}

template <typename Enum>
std::string enum_name(Enum e, const std::vector<std::pair<std::string, Enum>>& names) {
    for (const auto& [name, value] : names)
        if (value == e) return name;
    return "?";
}

const std::vector<std::pair<std::string, TargetKind>> kTargetKinds{
    {"square", TargetKind::square}, {"cross", TargetKind::cross},
    {"ring", TargetKind::ring}, {"custom", TargetKind::custom}};
const std::vector<std::pair<std::string, TrajectoryKind>> kTrajectoryKinds{
    {"linear", TrajectoryKind::linear}, {"sinusoid", TrajectoryKind::sinusoid},
    {"waypoints", TrajectoryKind::waypoints}};
const std::vector<std::pair<std::string, NoiseKind>> kNoiseKinds{
    {"none", NoiseKind::none}, {"gaussian", NoiseKind::gaussian}};
const std::vector<std::pair<std::string, FillMode>> kFillModes{
    {"zero", FillMode::zero}, {"wrap", FillMode::wrap}};
const std::vector<std::pair<std::string, ShiftConvention>> kConventions{
    {"toward_reference", ShiftConvention::toward_reference}, {"literal", ShiftConvention::literal}};
const std::vector<std::pair<std::string, MeanMode>> kMeanModes{
    {"per_segment", MeanMode::per_segment}, {"global", MeanMode::global}};
const std::vector<std::pair<std::string, CompensationSource>> kCompensation{
    {"estimate", CompensationSource::estimate}, {"truth", CompensationSource::truth}};
const std::vector<std::pair<std::string, RunMode>> kRunModes{
    {"simulate", RunMode::simulate}, {"sweep-t", RunMode::sweep_t}, {"sweep-k", RunMode::sweep_k}};

std::string join_reals(const std::vector<double>& v) {
    std::string out;
    for (double d : v) out += (out.empty() ? "" : ",") + exact(d);
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (int i : v) out += (out.empty() ? "" : ",") + std::to_string(i);
    return out;
}

std::string join_waypoints(const std::vector<GridPosition>& v) {
    std::string out;
    for (const auto& p : v) out += (out.empty() ? "" : ";") + std::to_string(p.x) + ":" + std::to_string(p.y);
    return out;
}

std::vector<GridPosition> parse_waypoints(const std::string& key, const std::string& v) {
    std::vector<GridPosition> out;
    for (const auto& item : split(v, ';')) {
        const auto xy = split(item, ':');
        if (xy.size() != 2) throw ConfigError(key + ": waypoint '" + item + "' is not x:y");
        out.push_back({to_int(key, xy[0]), to_int(key, xy[1])});
    }
    return out;
}

using Cfg = ExperimentConfig;

template <typename Get, typename Set>
ConfigField field(std::string key, std::string help, Get get, Set set) {
    return {std::move(key), std::move(help), std::move(get), std::move(set)};
}

std::vector<ConfigField> build_fields() {
    std::vector<ConfigField> f;
    f.push_back(field("mode", "simulate | sweep-t | sweep-k",
                      [](const Cfg& c) { return enum_name(c.mode, kRunModes); },
                      [](Cfg& c, const std::string& v) { c.mode = to_enum("mode", v, kRunModes); }));
    f.push_back(field("seed", "base RNG seed",
                      [](const Cfg& c) { return std::to_string(c.seed); },
                      [](Cfg& c, const std::string& v) { c.seed = to_seed("seed", v); }));
    f.push_back(field("output_dir", "directory for images, tables and manifest",
                      [](const Cfg& c) { return c.output_dir.string(); },
                      [](Cfg& c, const std::string& v) { c.output_dir = v; }));

    f.push_back(field("fov_width", "field of view width in pixels",
                      [](const Cfg& c) { return std::to_string(c.speckle.fov_width); },
                      [](Cfg& c, const std::string& v) { c.speckle.fov_width = to_int("fov_width", v); }));
    f.push_back(field("fov_height", "field of view height in pixels",
                      [](const Cfg& c) { return std::to_string(c.speckle.fov_height); },
                      [](Cfg& c, const std::string& v) { c.speckle.fov_height = to_int("fov_height", v); }));
    f.push_back(field("macro_pixel", "speckle block side in pixels",
                      [](const Cfg& c) { return std::to_string(c.speckle.macro_pixel); },
                      [](Cfg& c, const std::string& v) { c.speckle.macro_pixel = to_int("macro_pixel", v); }));
    f.push_back(field("bernoulli_p", "probability a speckle block is on",
                      [](const Cfg& c) { return exact(c.speckle.bernoulli_p); },
                      [](Cfg& c, const std::string& v) { c.speckle.bernoulli_p = to_real("bernoulli_p", v); }));
    f.push_back(field("on_value", "intensity of an on block",
                      [](const Cfg& c) { return exact(c.speckle.on_value); },
                      [](Cfg& c, const std::string& v) { c.speckle.on_value = to_real("on_value", v); }));
    f.push_back(field("off_value", "intensity of an off block",
                      [](const Cfg& c) { return exact(c.speckle.off_value); },
                      [](Cfg& c, const std::string& v) { c.speckle.off_value = to_real("off_value", v); }));

    f.push_back(field("target_kind", "square | cross | ring | custom",
                      [](const Cfg& c) { return enum_name(c.target_kind, kTargetKinds); },
                      [](Cfg& c, const std::string& v) { c.target_kind = to_enum("target_kind", v, kTargetKinds); }));
    f.push_back(field("target_size", "glyph side in pixels (>= 3)",
                      [](const Cfg& c) { return std::to_string(c.target_size); },
                      [](Cfg& c, const std::string& v) { c.target_size = to_int("target_size", v); }));
    f.push_back(field("ring_inner_fraction", "inner radius of the ring glyph as a fraction of the outer",
                      [](const Cfg& c) { return exact(c.ring_inner_fraction); },
                      [](Cfg& c, const std::string& v) { c.ring_inner_fraction = to_real("ring_inner_fraction", v); }));
    f.push_back(field("target_path", "P5 bitmap for target_kind = custom",
                      [](const Cfg& c) { return c.target_path.string(); },
                      [](Cfg& c, const std::string& v) { c.target_path = v; }));

    f.push_back(field("trajectory", "linear | sinusoid | waypoints",
                      [](const Cfg& c) { return enum_name(c.trajectory.kind, kTrajectoryKinds); },
                      [](Cfg& c, const std::string& v) { c.trajectory.kind = to_enum("trajectory", v, kTrajectoryKinds); }));
    f.push_back(field("start_x", "trajectory start, top-left x",
                      [](const Cfg& c) { return exact(c.trajectory.start.x); },
                      [](Cfg& c, const std::string& v) { c.trajectory.start.x = to_real("start_x", v); }));
    f.push_back(field("start_y", "trajectory start, top-left y",
                      [](const Cfg& c) { return exact(c.trajectory.start.y); },
                      [](Cfg& c, const std::string& v) { c.trajectory.start.y = to_real("start_y", v); }));
    f.push_back(field("velocity_x", "drift per segment along x",
                      [](const Cfg& c) { return exact(c.trajectory.velocity.x); },
                      [](Cfg& c, const std::string& v) { c.trajectory.velocity.x = to_real("velocity_x", v); }));
    f.push_back(field("velocity_y", "drift per segment along y",
                      [](const Cfg& c) { return exact(c.trajectory.velocity.y); },
                      [](Cfg& c, const std::string& v) { c.trajectory.velocity.y = to_real("velocity_y", v); }));
    f.push_back(field("amplitude", "sinusoid amplitude along y, pixels",
                      [](const Cfg& c) { return exact(c.trajectory.amplitude); },
                      [](Cfg& c, const std::string& v) { c.trajectory.amplitude = to_real("amplitude", v); }));
    f.push_back(field("angular_step", "sinusoid phase advance per segment, radians",
                      [](const Cfg& c) { return exact(c.trajectory.angular_step); },
                      [](Cfg& c, const std::string& v) { c.trajectory.angular_step = to_real("angular_step", v); }));
    f.push_back(field("waypoints", "x:y;x:y;... top-left positions for trajectory = waypoints",
                      [](const Cfg& c) { return join_waypoints(c.trajectory.waypoints); },
                      [](Cfg& c, const std::string& v) { c.trajectory.waypoints = parse_waypoints("waypoints", v); }));

    f.push_back(field("K", "samples per segment",
                      [](const Cfg& c) { return std::to_string(c.samples_per_segment); },
                      [](Cfg& c, const std::string& v) { c.samples_per_segment = to_int("K", v); }));
    f.push_back(field("r", "number of segments",
                      [](const Cfg& c) { return std::to_string(c.segments); },
                      [](Cfg& c, const std::string& v) { c.segments = to_int("r", v); }));
    f.push_back(field("t", "screening threshold in [0, 1]",
                      [](const Cfg& c) { return exact(c.threshold); },
                      [](Cfg& c, const std::string& v) { c.threshold = to_real("t", v); }));

    f.push_back(field("noise", "none | gaussian",
                      [](const Cfg& c) { return enum_name(c.noise.kind, kNoiseKinds); },
                      [](Cfg& c, const std::string& v) { c.noise.kind = to_enum("noise", v, kNoiseKinds); }));
    f.push_back(field("noise_sigma", "bucket noise standard deviation",
                      [](const Cfg& c) { return exact(c.noise.sigma); },
                      [](Cfg& c, const std::string& v) { c.noise.sigma = to_real("noise_sigma", v); }));
    f.push_back(field("noise_seed", "extra seed word mixed into the noise stream",
                      [](const Cfg& c) { return std::to_string(c.noise.seed); },
                      [](Cfg& c, const std::string& v) { c.noise.seed = to_seed("noise_seed", v); }));

    f.push_back(field("fill", "vacated speckle pixels after translation: zero | wrap",
                      [](const Cfg& c) { return enum_name(c.shift.fill, kFillModes); },
                      [](Cfg& c, const std::string& v) { c.shift.fill = to_enum("fill", v, kFillModes); }));
    f.push_back(field("reference_x", "canonical target center x, or auto (FOV center)",
                      [](const Cfg& c) { return c.auto_reference ? std::string("auto") : std::to_string(c.shift.reference.x); },
                      [](Cfg& c, const std::string& v) {
                          if (v == "auto") { c.auto_reference = true; return; }
                          c.auto_reference = false;
                          c.shift.reference.x = to_int("reference_x", v);
                      }));
    f.push_back(field("reference_y", "canonical target center y, or auto (FOV center)",
                      [](const Cfg& c) { return c.auto_reference ? std::string("auto") : std::to_string(c.shift.reference.y); },
                      [](Cfg& c, const std::string& v) {
                          if (v == "auto") { c.auto_reference = true; return; }
                          c.auto_reference = false;
                          c.shift.reference.y = to_int("reference_y", v);
                      }));
    f.push_back(field("shift_convention", "toward_reference | literal",
                      [](const Cfg& c) { return enum_name(c.shift.convention, kConventions); },
                      [](Cfg& c, const std::string& v) { c.shift.convention = to_enum("shift_convention", v, kConventions); }));
    f.push_back(field("mean_mode", "per_segment | global centering of the compensated correlation",
                      [](const Cfg& c) { return enum_name(c.mean_mode, kMeanModes); },
                      [](Cfg& c, const std::string& v) { c.mean_mode = to_enum("mean_mode", v, kMeanModes); }));
    f.push_back(field("compensation", "estimate | truth",
                      [](const Cfg& c) { return enum_name(c.compensation, kCompensation); },
                      [](Cfg& c, const std::string& v) { c.compensation = to_enum("compensation", v, kCompensation); }));
    f.push_back(field("fallback_argmax", "use the argmax pixel when a segment has no positive signal",
                      [](const Cfg& c) { return std::string(c.fallback_argmax ? "true" : "false"); },
                      [](Cfg& c, const std::string& v) { c.fallback_argmax = to_bool("fallback_argmax", v); }));

    f.push_back(field("t_values", "comma-separated thresholds for sweep-t",
                      [](const Cfg& c) { return join_reals(c.t_values); },
                      [](Cfg& c, const std::string& v) {
                          c.t_values.clear();
                          for (const auto& s : split(v, ',')) c.t_values.push_back(to_real("t_values", s));
                      }));
    f.push_back(field("k_values", "comma-separated samples-per-segment values for sweep-k",
                      [](const Cfg& c) { return join_ints(c.k_values); },
                      [](Cfg& c, const std::string& v) {
                          c.k_values.clear();
                          for (const auto& s : split(v, ',')) c.k_values.push_back(to_int("k_values", s));
                      }));
    f.push_back(field("n_trials", "trials per sweep point",
                      [](const Cfg& c) { return std::to_string(c.n_trials); },
                      [](Cfg& c, const std::string& v) { c.n_trials = to_int("n_trials", v); }));
    f.push_back(field("threads", "worker threads for sweeps, 0 = all cores",
                      [](const Cfg& c) { return std::to_string(c.threads); },
                      [](Cfg& c, const std::string& v) { c.threads = to_int("threads", v); }));
    return f;
}

}  // namespace

const std::vector<ConfigField>& config_fields() {
    static const std::vector<ConfigField> fields = build_fields();
    return fields;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& f : config_fields())
        if (f.key == key) {
            f.set(cfg, trim(value));
            return;
        }
    throw ConfigError("unknown configuration key '" + key + "'");
}

void parse_config(std::istream& in, ExperimentConfig& cfg) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config", path);
    ExperimentConfig cfg;
    parse_config(in, cfg);
    return cfg;
}

void write_config(std::ostream& out, const ExperimentConfig& cfg) {
    out << "# ghosttrack resolved configuration\n";
    for (const auto& f : config_fields()) out << f.key << " = " << f.get(cfg) << '\n';
}

void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open config for writing", path);
    write_config(out, cfg);
    if (!out) throw IoError("failed writing config", path);
}

std::string to_string(RunMode mode) { return enum_name(mode, kRunModes); }

void ExperimentConfig::validate() const {
    speckle.validate();
    noise.validate();
    if (target_kind == TargetKind::custom) {
        if (target_path.empty()) throw ConfigError("target_kind = custom needs target_path");
    } else if (target_size < 3) {
        throw ConfigError("target_size must be at least 3");
    }
    if (samples_per_segment < 2) throw ConfigError("K must be at least 2");
    if (segments < 1) throw ConfigError("r must be at least 1");
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw ConfigError("t must lie in [0, 1]");
    if (!auto_reference) {
        if (shift.reference.x < 0 || shift.reference.x >= speckle.fov_width || shift.reference.y < 0 ||
            shift.reference.y >= speckle.fov_height)
            throw ConfigError("reference point lies outside the field of view");
    }
    if (n_trials < 1) throw ConfigError("n_trials must be at least 1");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    for (double t : t_values)
        if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("t_values entries must lie in [0, 1]");
    for (int k : k_values)
        if (k < 2) throw ConfigError("k_values entries must be at least 2");
}

TargetImage ExperimentConfig::build_target() const {
    if (target_kind == TargetKind::custom) return load_target_pgm(target_path);
    return make_target(target_kind, target_size, ring_inner_fraction);
}

TrajectoryConfig ExperimentConfig::resolved_trajectory(Extent target) const {
    TrajectoryConfig t = trajectory;
    t.segments = segments;
    t.fov = speckle.extent();
    t.target = target;
    t.validate();
    return t;
}

ShiftPolicy ExperimentConfig::resolved_shift() const {
    ShiftPolicy p = shift;
    if (auto_reference) p.reference = {speckle.fov_width / 2, speckle.fov_height / 2};
    return p;
}

}  // namespace ghosttrack
