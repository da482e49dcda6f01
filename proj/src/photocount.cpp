#include "qmoire/photocount.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace qmoire::photocount {

std::uint64_t sample_step_counts(const twin::ExperimentConfig& config, double delta_g1_mm,
                                 double delta_g2_mm, double mean_pairs, rng::CounterStream& stream) {
    if (!(mean_pairs > 0.0)) throw std::invalid_argument("sample_step_counts: mean_pairs must be > 0");

    double scale = config.effective_g1_scale();
    optics::TransmissionMask t1eff = config.grating_1.shifted(delta_g1_mm).scaled(scale);
    optics::TransmissionMask t2 = config.grating_2.shifted(delta_g2_mm);
    double lo, hi;
    config.detection_window(lo, hi);
    double width = hi - lo;

    std::uint64_t generated = stream.next_poisson(mean_pairs);
    std::uint64_t accepted = 0;
    for (std::uint64_t i = 0; i < generated; ++i) {
        double x = lo + stream.next_double() * width;
        double p = t1eff(x) * t2(x);
        if (!(p >= 0.0 && p <= 1.0 + 1e-12))
            throw std::logic_error("sample_step_counts: transmission product outside [0,1]");
        if (stream.next_double() < p) ++accepted;
    }
    return accepted;
}

CountRecord run_counting_scan(const twin::ExperimentConfig& config, const CountingPlan& plan,
                              int n_workers) {
    plan.validate();
    if (n_workers < 1) throw std::invalid_argument("run_counting_scan: n_workers must be >= 1");

    const int n = plan.schedule.n_steps;
    CountRecord rec;
    rec.positions_mm.resize(n);
    rec.counts.resize(n);
    rec.expected_counts.resize(n);

    auto work = [&](int begin, int end) {
        for (int k = begin; k < end; ++k) {
            double d1 = plan.schedule.g1_displacement(k);
            double d2 = plan.schedule.g2_displacement(k);
            rng::CounterStream stream(plan.seed, static_cast<std::uint64_t>(k));
            std::uint64_t c = sample_step_counts(config, d1, d2, plan.mean_pairs_per_step, stream);
            if (plan.mean_background_per_step > 0.0)
                c += stream.next_poisson(plan.mean_background_per_step);
            rec.positions_mm[k] = plan.schedule.g2_displacement(k);
            rec.counts[k] = c;
            rec.expected_counts[k] = plan.mean_pairs_per_step * twin::coincidence_rate(config, d1, d2) +
                                     plan.mean_background_per_step;
        }
    };

    if (n_workers == 1 || n < 2) {
        work(0, n);
    } else {
        int workers = std::min(n_workers, n);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        int chunk = (n + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            int begin = w * chunk;
            int end = std::min(n, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(work, begin, end);
        }
        for (auto& t : pool) t.join();
    }
    return rec;
}

}  // namespace qmoire::photocount
