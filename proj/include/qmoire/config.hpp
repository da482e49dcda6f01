#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "qmoire/experiment.hpp"
#include "qmoire/fit.hpp"
#include "qmoire/photocount.hpp"

namespace qmoire::harness {

enum class PresetName { Fig3a, Fig3b, Fig5a, Fig5b, Fig1a, Fig1b };

std::optional<PresetName> preset_from_string(std::string_view name);
std::string to_string(PresetName name);

/// Fully resolved experiment: geometry, scan schedule and counting plan, plus
/// what the runner should do with it by default.
struct RunSetup {
    std::string name = "custom";
    twin::ExperimentConfig config;
    twin::ScanSchedule schedule;
    photocount::CountingPlan plan;
    bool classical_pattern = false;  // render a 2-D pattern instead of scanning
    analysis::FitModel default_fit = analysis::FitModel::ProductCos2;
};

/// Built-in reproductions: the two pump-idler scans, the two signal-idler
/// scans and the two classical reference patterns.
RunSetup make_preset(PresetName name);

/// Parse a flat key=value config file (UTF-8, '#' comments). Lengths are mm,
/// wavelengths nm. Unknown keys, unparsable values and constraint violations
/// raise ConfigError with the offending line number; missing required keys are
/// all listed in one error.
RunSetup load_config(const std::string& path);

}  // namespace qmoire::harness
