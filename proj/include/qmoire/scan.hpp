#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qmoire {

enum class ScanKind { AnalyticRate, Counts };

/// Ordered samples from one simulated scan.
struct ScanRecord {
    std::vector<double> positions_mm;
    std::vector<double> values;
    ScanKind kind = ScanKind::AnalyticRate;

    std::size_t size() const { return positions_mm.size(); }

    void validate() const {
        if (positions_mm.size() != values.size())
            throw std::invalid_argument("ScanRecord: positions/values length mismatch");
    }

    /// True when positions are uniformly spaced; fills the common step.
    bool uniform_step(double& step_out, double rel_tol = 1e-9) const {
        if (positions_mm.size() < 2) return false;
        double step = positions_mm[1] - positions_mm[0];
        for (std::size_t k = 2; k < positions_mm.size(); ++k) {
            double s = positions_mm[k] - positions_mm[k - 1];
            if (std::abs(s - step) > rel_tol * std::max(std::abs(step), 1.0)) return false;
        }
        step_out = step;
        return true;
    }
};

}  // namespace qmoire
