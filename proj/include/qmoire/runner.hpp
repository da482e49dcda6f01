#pragma once

#include <string>

#include "qmoire/config.hpp"
#include "qmoire/io.hpp"

namespace qmoire::harness {

enum class RunMode { Analytic, MonteCarlo };

struct RunOptions {
    RunMode mode = RunMode::Analytic;
    std::string output_dir = ".";
    int n_workers = 1;
};

/// Execute one setup end to end. Scan setups write <name>_scan.csv and
/// <name>_fit.json (the preset's default model, auto-initialized); pattern
/// setups write <name>.pgm, the center-line extraction as <name>_scanline.csv
/// and the beat analysis of that line as the report. Fit non-convergence is
/// recorded in the report, not raised.
OutputBundle run_preset(const RunSetup& setup, const RunOptions& options);

}  // namespace qmoire::harness
