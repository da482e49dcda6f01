#include "qmoire/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qmoire/errors.hpp"

namespace qmoire::harness {

std::optional<PresetName> preset_from_string(std::string_view name) {
    if (name == "fig3a") return PresetName::Fig3a;
    if (name == "fig3b") return PresetName::Fig3b;
    if (name == "fig5a") return PresetName::Fig5a;
    if (name == "fig5b") return PresetName::Fig5b;
    if (name == "fig1a") return PresetName::Fig1a;
    if (name == "fig1b") return PresetName::Fig1b;
    return std::nullopt;
}

std::string to_string(PresetName name) {
    switch (name) {
        case PresetName::Fig3a: return "fig3a";
        case PresetName::Fig3b: return "fig3b";
        case PresetName::Fig5a: return "fig5a";
        case PresetName::Fig5b: return "fig5b";
        case PresetName::Fig1a: return "fig1a";
        case PresetName::Fig1b: return "fig1b";
    }
    return "?";
}

namespace {

using optics::MaskProfile;

RunSetup base_setup() {
    RunSetup s;
    s.config = twin::ExperimentConfig{};
    s.plan.mean_pairs_per_step = 1e4;
    s.plan.seed = 1;
    return s;
}

RunSetup scan_preset(const std::string& name, twin::SetupKind kind, double p1, double p2,
                     double step1, double step2, int n_steps, analysis::FitModel fit) {
    RunSetup s = base_setup();
    s.name = name;
    s.config.kind = kind;
    s.config.grating_1 = optics::make_grating(p1, 0.0, MaskProfile::CosineSquared);
    s.config.grating_2 = optics::make_grating(p2, 0.0, MaskProfile::CosineSquared);
    s.schedule.n_steps = n_steps;
    s.schedule.step_g1_mm = step1;
    s.schedule.step_g2_mm = step2;
    s.plan.schedule = s.schedule;
    s.default_fit = fit;
    return s;
}

RunSetup pattern_preset(const std::string& name, double p1, double p2) {
    RunSetup s = base_setup();
    s.name = name;
    s.classical_pattern = true;
    s.config.grating_1 = optics::make_grating(p1, 0.0, MaskProfile::CosineSquared);
    s.config.grating_2 = optics::make_grating(p2, 0.0, MaskProfile::CosineSquared);
    s.default_fit = analysis::FitModel::EnvelopeCos2;
    return s;
}

}  // namespace

RunSetup make_preset(PresetName name) {
    switch (name) {
        case PresetName::Fig3a:
            // 0.8 mm pump grating (transferred to 1.6 mm) against 1.2 mm,
            // stepped 0.1 / 0.2 mm; 24 mm scan = 5 beat periods of 4.8 mm
            return scan_preset("fig3a", twin::SetupKind::PumpIdler, 0.8, 1.2, 0.1, 0.2, 121,
                               analysis::FitModel::ProductCos2);
        case PresetName::Fig3b:
            // 0.4 mm pump grating (effective 0.8) against 0.9, stepped 0.05 / 0.1
            return scan_preset("fig3b", twin::SetupKind::PumpIdler, 0.4, 0.9, 0.05, 0.1, 161,
                               analysis::FitModel::EnvelopeCos2);
        case PresetName::Fig5a:
            // same effective pair as fig3a with the gratings in the signal and
            // idler arms; grating 1 steps backwards so its inverted image
            // co-moves with grating 2
            return scan_preset("fig5a", twin::SetupKind::SignalIdler, 1.6, 1.2, -0.2, 0.2, 121,
                               analysis::FitModel::ProductCos2);
        case PresetName::Fig5b:
            return scan_preset("fig5b", twin::SetupKind::SignalIdler, 0.8, 0.9, -0.1, 0.1, 161,
                               analysis::FitModel::EnvelopeCos2);
        case PresetName::Fig1a:
            return pattern_preset("fig1a", 1.2, 1.6);
        case PresetName::Fig1b:
            return pattern_preset("fig1b", 0.8, 0.9);
    }
    throw std::invalid_argument("make_preset: unknown preset");
}

namespace {

struct KeyValue {
    std::string value;
    int line = 0;
};

std::string trim(std::string s) {
    auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
    return s;
}

double parse_double(const std::string& key, const KeyValue& kv) {
    const std::string& v = kv.value;
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("value of '" + key + "' is not a number: '" + v + "'", kv.line);
    return out;
}

std::uint64_t parse_u64(const std::string& key, const KeyValue& kv) {
    const std::string& v = kv.value;
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("value of '" + key + "' is not an unsigned integer: '" + v + "'", kv.line);
    return out;
}

MaskProfile parse_profile(const std::string& key, const KeyValue& kv) {
    if (kv.value == "cosine_squared") return MaskProfile::CosineSquared;
    if (kv.value == "binary") return MaskProfile::Binary;
    if (kv.value == "open") return MaskProfile::Open;
    throw ConfigError("value of '" + key + "' must be cosine_squared, binary or open", kv.line);
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "setup",        "g1.period",      "g1.profile",    "g1.contrast",   "g2.period",
        "g2.profile",   "g2.contrast",    "sigma",         "pinhole.diameter", "lambda.pump",
        "lambda.signal", "lambda.idler",  "focal.length",  "scan.steps",    "scan.step.g1",
        "scan.step.g2", "mc.mean_pairs",  "mc.seed",       "grid.pitch",    "grid.points",
        "region.halfwidth"};
    return keys;
}

}  // namespace

RunSetup load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);

    std::map<std::string, KeyValue> kvs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value", lineno);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!known_keys().count(key)) throw ConfigError("unknown key '" + key + "'", lineno);
        if (kvs.count(key)) throw ConfigError("duplicate key '" + key + "'", lineno);
        if (value.empty()) throw ConfigError("empty value for '" + key + "'", lineno);
        kvs[key] = {value, lineno};
    }

    static const char* required[] = {"setup",        "g1.period",    "g2.period",
                                     "scan.steps",   "scan.step.g1", "scan.step.g2"};
    std::string missing;
    for (const char* key : required) {
        if (!kvs.count(key)) missing += missing.empty() ? std::string(key) : ", " + std::string(key);
    }
    if (!missing.empty()) throw ConfigError("missing required keys: " + missing);

    RunSetup s = base_setup();
    s.name = "custom";

    const KeyValue& setup = kvs.at("setup");
    if (setup.value == "pump_idler") s.config.kind = twin::SetupKind::PumpIdler;
    else if (setup.value == "signal_idler") s.config.kind = twin::SetupKind::SignalIdler;
    else throw ConfigError("value of 'setup' must be pump_idler or signal_idler", setup.line);

    auto build_mask = [&](const std::string& prefix) {
        const KeyValue& period_kv = kvs.at(prefix + ".period");
        MaskProfile profile = MaskProfile::CosineSquared;
        if (auto it = kvs.find(prefix + ".profile"); it != kvs.end())
            profile = parse_profile(prefix + ".profile", it->second);
        double contrast = 1.0;
        if (auto it = kvs.find(prefix + ".contrast"); it != kvs.end())
            contrast = parse_double(prefix + ".contrast", it->second);
        if (period_kv.value == "open") profile = MaskProfile::Open;
        try {
            if (profile == MaskProfile::Open) {
                auto m = optics::open_mask();
                return m;
            }
            double period = parse_double(prefix + ".period", period_kv);
            return optics::make_grating(period, 0.0, profile, contrast);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string(e.what()), period_kv.line);
        }
    };
    s.config.grating_1 = build_mask("g1");
    s.config.grating_2 = build_mask("g2");

    auto opt_double = [&](const char* key, double& out) {
        if (auto it = kvs.find(key); it != kvs.end()) out = parse_double(key, it->second);
    };
    opt_double("sigma", s.config.transfer_scale);
    double pinhole = s.config.pinhole_signal.diameter_mm;
    opt_double("pinhole.diameter", pinhole);
    s.config.pinhole_signal.diameter_mm = pinhole;
    s.config.pinhole_idler.diameter_mm = pinhole;
    opt_double("lambda.pump", s.config.lambda_pump_nm);
    opt_double("lambda.signal", s.config.lambda_signal_nm);
    opt_double("lambda.idler", s.config.lambda_idler_nm);
    opt_double("focal.length", s.config.focal_length_mm);
    opt_double("region.halfwidth", s.config.coincidence_halfwidth_mm);

    double pitch = s.config.grid.pitch_mm;
    opt_double("grid.pitch", pitch);
    std::size_t points = s.config.grid.n_points;
    if (auto it = kvs.find("grid.points"); it != kvs.end())
        points = static_cast<std::size_t>(parse_u64("grid.points", it->second));
    try {
        s.config.grid = optics::SpatialGrid::centered(points, pitch);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), kvs.count("grid.pitch") ? kvs.at("grid.pitch").line : 0);
    }

    const KeyValue& steps_kv = kvs.at("scan.steps");
    auto steps = parse_u64("scan.steps", steps_kv);
    if (steps < 1) throw ConfigError("scan.steps must be >= 1", steps_kv.line);
    s.schedule.n_steps = static_cast<int>(steps);
    s.schedule.step_g1_mm = parse_double("scan.step.g1", kvs.at("scan.step.g1"));
    s.schedule.step_g2_mm = parse_double("scan.step.g2", kvs.at("scan.step.g2"));

    opt_double("mc.mean_pairs", s.plan.mean_pairs_per_step);
    if (auto it = kvs.find("mc.seed"); it != kvs.end()) s.plan.seed = parse_u64("mc.seed", it->second);
    s.plan.schedule = s.schedule;

    try {
        s.config.validate();
        s.plan.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return s;
}

}  // namespace qmoire::harness
