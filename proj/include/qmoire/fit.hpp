#pragma once

#include <optional>

#include "qmoire/scan.hpp"

namespace qmoire::analysis {

enum class FitModel { ProductCos2, EnvelopeCos2 };

/// Nonlinear least-squares result. For ProductCos2 the model is
///   y = offset + amplitude * cos^2(pi (x - phase1)/period1) * cos^2(pi (x - phase2)/period2)
/// and for EnvelopeCos2
///   y = offset + amplitude * cos^2(pi (x - phase1)/period1).
struct FitResult {
    FitModel model = FitModel::ProductCos2;
    double amplitude = 0.0;
    double offset = 0.0;
    double period1 = 0.0;
    double period2 = 0.0;  // unused for EnvelopeCos2
    double phase1 = 0.0;
    double phase2 = 0.0;
    double residual_norm = 0.0;
    bool converged = false;
    bool identifiable = true;
    int iterations = 0;
};

/// Optional starting values; anything unset is derived from the data
/// (periodogram lines for the periods, coarse grid search for the phases,
/// linear least squares for amplitude and offset).
struct FitInit {
    std::optional<double> amplitude;
    std::optional<double> offset;
    std::optional<double> period1;
    std::optional<double> period2;
    std::optional<double> phase1;
    std::optional<double> phase2;
};

struct FitOptions {
    int max_iterations = 500;
    double step_tolerance = 1e-8;      // relative parameter step for convergence
    double period_min_mm = 0.1;        // box bounds keep periods off aliasing pathologies
    double period_max_mm = 100.0;
    /// Envelope fits: decimate to per-window local maxima (window = one fast
    /// period) before fitting, to target the slow modulation.
    std::optional<double> fast_period_hint_mm;
};

/// Fit the two-grating product model by damped Gauss-Newton with a central
/// difference Jacobian. Never throws on bad data fits: non-convergence and
/// non-identifiable (constant or zero-amplitude) data are reported in the
/// result flags. Requires >= 8 samples.
FitResult fit_product_cos2(const ScanRecord& data, const FitInit& init = {},
                           const FitOptions& options = {});

/// Fit the single cos^2 envelope model (see FitOptions::fast_period_hint_mm
/// for data that still contains an unresolved fast modulation).
FitResult fit_envelope_cos2(const ScanRecord& data, const FitInit& init = {},
                            const FitOptions& options = {});

}  // namespace qmoire::analysis
