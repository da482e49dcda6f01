#pragma once

#include <cstdint>
#include <vector>

#include "qmoire/experiment.hpp"
#include "qmoire/rng.hpp"
#include "qmoire/scan.hpp"

namespace qmoire::photocount {

/// Acquisition statistics for a counting scan. Pair generation is Poissonian
/// with the given mean per step; the optional background adds accidental
/// coincidences uniform over the scan.
struct CountingPlan {
    double mean_pairs_per_step = 1e4;
    std::uint64_t seed = 1;
    twin::ScanSchedule schedule;
    double mean_background_per_step = 0.0;

    void validate() const {
        schedule.validate();
        if (!(mean_pairs_per_step > 0.0))
            throw std::invalid_argument("CountingPlan: mean_pairs_per_step must be > 0");
        if (mean_background_per_step < 0.0)
            throw std::invalid_argument("CountingPlan: background must be >= 0");
    }
};

/// Counts per step together with the Poisson mean they were drawn from.
struct CountRecord {
    std::vector<double> positions_mm;
    std::vector<std::uint64_t> counts;
    std::vector<double> expected_counts;

    std::size_t size() const { return positions_mm.size(); }

    ScanRecord to_scan_record() const {
        ScanRecord rec;
        rec.positions_mm = positions_mm;
        rec.values.assign(counts.begin(), counts.end());
        rec.kind = ScanKind::Counts;
        return rec;
    }
};

/// One acquisition window: draw N ~ Poisson(mean_pairs) generated pairs, place
/// each uniformly in the detection window, accept with probability
/// T1_eff * T2. The accepted count has expectation mean_pairs * C(d1, d2).
std::uint64_t sample_step_counts(const twin::ExperimentConfig& config, double delta_g1_mm,
                                 double delta_g2_mm, double mean_pairs, rng::CounterStream& stream);

/// Full counting scan. Each step draws from its own counter-based stream
/// keyed by (plan.seed, step), so the output is identical for any worker
/// count and any evaluation order.
CountRecord run_counting_scan(const twin::ExperimentConfig& config, const CountingPlan& plan,
                              int n_workers = 1);

}  // namespace qmoire::photocount
