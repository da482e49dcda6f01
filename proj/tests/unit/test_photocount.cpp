#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qmoire/experiment.hpp"
#include "qmoire/fit.hpp"
#include "qmoire/photocount.hpp"

using namespace qmoire;
using namespace qmoire::optics;
using namespace qmoire::twin;
using namespace qmoire::photocount;

namespace {

ExperimentConfig aligned_cosines() {
    ExperimentConfig c;
    c.kind = SetupKind::PumpIdler;
    c.transfer_scale = 1.0;
    c.grating_1 = make_grating(1.6, 0.0, MaskProfile::CosineSquared);
    c.grating_2 = make_grating(1.2, 0.0, MaskProfile::CosineSquared);
    return c;
}

}  // namespace

TEST_CASE("counter streams are reproducible and distinct") {
    rng::CounterStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    for (int i = 0; i < 100; ++i) {
        auto va = a.next_u64();
        CHECK(va == b.next_u64());
        CHECK(va != c.next_u64());
        CHECK(va != d.next_u64());
    }
    rng::CounterStream u(1, 0);
    for (int i = 0; i < 1000; ++i) {
        double x = u.next_double();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("blocked masks yield zero counts") {
    ExperimentConfig c;
    c.kind = SetupKind::PumpIdler;
    c.transfer_scale = 1.0;
    c.grating_1 = make_grating(1.0, 0.0, MaskProfile::CosineSquared);
    c.grating_2 = make_grating(1.0, 0.0, MaskProfile::CosineSquared);
    // point-like window centered on a transmission null of both gratings
    c.pinhole_signal = {1e-6, 0.5};
    c.pinhole_idler = {1e-6, 0.5};
    for (int s = 0; s < 100; ++s) {
        rng::CounterStream stream(99, static_cast<std::uint64_t>(s));
        CHECK(sample_step_counts(c, 0.0, 0.0, 50.0, stream) == 0);
    }
}

TEST_CASE("open masks count every generated pair") {
    ExperimentConfig c;
    c.grating_1 = open_mask();
    c.grating_2 = open_mask();
    const double mean = 400.0;
    const int n_seeds = 1000;
    double total = 0.0;
    for (int s = 0; s < n_seeds; ++s) {
        rng::CounterStream stream(7, static_cast<std::uint64_t>(s));
        total += static_cast<double>(sample_step_counts(c, 0.0, 0.0, mean, stream));
    }
    double avg = total / n_seeds;
    CHECK(std::fabs(avg - mean) < 3.0 * std::sqrt(mean / n_seeds));
}

TEST_CASE("sample mean tracks the analytic rate") {
    auto c = aligned_cosines();
    const double mean = 1e4;
    double rate = coincidence_rate(c, 0.0, 0.0);
    const int reps = 200;
    double total = 0.0;
    for (int s = 0; s < reps; ++s) {
        rng::CounterStream stream(123, static_cast<std::uint64_t>(s));
        total += static_cast<double>(sample_step_counts(c, 0.0, 0.0, mean, stream));
    }
    double avg = total / reps;
    double mu = mean * rate;
    CHECK(std::fabs(avg - mu) < 3.0 * std::sqrt(mu / reps));
}

TEST_CASE("unbiasedness over 1000 seeds at a fixed displacement") {
    auto c = aligned_cosines();
    const double mean = 1000.0;
    double mu = mean * coincidence_rate(c, 0.4, 0.4);
    const int n_seeds = 1000;
    double total = 0.0;
    for (int s = 0; s < n_seeds; ++s) {
        rng::CounterStream stream(2024, static_cast<std::uint64_t>(s));
        total += static_cast<double>(sample_step_counts(c, 0.4, 0.4, mean, stream));
    }
    CHECK(std::fabs(total / n_seeds - mu) < 3.0 * std::sqrt(mu / n_seeds));
}

TEST_CASE("index of dispersion is Poissonian") {
    auto c = aligned_cosines();
    const double mean = 250.0;  // mu = mean * C >= 100
    const int n_seeds = 1500;
    std::vector<double> counts(n_seeds);
    for (int s = 0; s < n_seeds; ++s) {
        rng::CounterStream stream(20260811, static_cast<std::uint64_t>(s));
        counts[s] = static_cast<double>(sample_step_counts(c, 0.0, 0.0, mean, stream));
    }
    double avg = std::accumulate(counts.begin(), counts.end(), 0.0) / n_seeds;
    REQUIRE(avg >= 100.0);
    double var = 0.0;
    for (double v : counts) var += (v - avg) * (v - avg);
    var /= n_seeds - 1;
    double dispersion = var / avg;
    CHECK(dispersion > 0.9);
    CHECK(dispersion < 1.1);
}

TEST_CASE("per-step streams show no cross-step correlation") {
    // constant-rate plan: any lag-1 correlation must sit inside the
    // permutation null band
    ExperimentConfig c;
    c.grating_1 = open_mask();
    c.grating_2 = open_mask();
    CountingPlan plan;
    plan.mean_pairs_per_step = 100.0;
    plan.seed = 31337;
    plan.schedule.n_steps = 400;
    plan.schedule.step_g2_mm = 0.1;
    auto rec = run_counting_scan(c, plan);

    auto lag1 = [](const std::vector<double>& v) {
        double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            den += (v[k] - m) * (v[k] - m);
            if (k + 1 < v.size()) num += (v[k] - m) * (v[k + 1] - m);
        }
        return num / den;
    };
    std::vector<double> obs(rec.counts.begin(), rec.counts.end());
    double r_obs = lag1(obs);

    std::mt19937 gen(97);
    std::vector<double> null;
    std::vector<double> shuffled = obs;
    for (int t = 0; t < 500; ++t) {
        std::shuffle(shuffled.begin(), shuffled.end(), gen);
        null.push_back(lag1(shuffled));
    }
    std::sort(null.begin(), null.end());
    double lo = null[static_cast<std::size_t>(0.005 * null.size())];
    double hi = null[static_cast<std::size_t>(0.995 * null.size()) - 1];
    CHECK(r_obs >= lo);
    CHECK(r_obs <= hi);
}

TEST_CASE("counting scans are deterministic and worker-count invariant") {
    auto c = aligned_cosines();
    CountingPlan plan;
    plan.mean_pairs_per_step = 500.0;
    plan.seed = 77;
    plan.schedule.n_steps = 64;
    plan.schedule.step_g1_mm = 0.1;
    plan.schedule.step_g2_mm = 0.1;

    auto a = run_counting_scan(c, plan, 1);
    auto b = run_counting_scan(c, plan, 1);
    CHECK(a.counts == b.counts);

    for (int workers : {2, 4, 7}) {
        auto w = run_counting_scan(c, plan, workers);
        CHECK(w.counts == a.counts);
        CHECK(w.positions_mm == a.positions_mm);
    }

    plan.seed = 78;
    auto other = run_counting_scan(c, plan, 1);
    CHECK(other.counts != a.counts);
}

TEST_CASE("high-flux counting scan recovers the grating periods") {
    ExperimentConfig c;
    c.kind = SetupKind::PumpIdler;
    c.grating_1 = make_grating(0.8, 0.0, MaskProfile::CosineSquared);
    c.grating_2 = make_grating(1.2, 0.0, MaskProfile::CosineSquared);
    CountingPlan plan;
    plan.mean_pairs_per_step = 1e6;
    plan.seed = 11;
    plan.schedule.n_steps = 121;
    plan.schedule.step_g1_mm = 0.1;
    plan.schedule.step_g2_mm = 0.2;
    auto rec = run_counting_scan(c, plan, 4).to_scan_record();

    auto fit = analysis::fit_product_cos2(rec);
    REQUIRE(fit.converged);
    double lo = std::min(fit.period1, fit.period2);
    double hi = std::max(fit.period1, fit.period2);
    CHECK(std::fabs(lo - 1.2) / 1.2 < 0.005);
    CHECK(std::fabs(hi - 1.6) / 1.6 < 0.005);
}

TEST_CASE("low-flux counting scan still finds the beat envelope") {
    ExperimentConfig c;
    c.kind = SetupKind::PumpIdler;
    c.grating_1 = make_grating(0.4, 0.0, MaskProfile::CosineSquared);
    c.grating_2 = make_grating(0.9, 0.0, MaskProfile::CosineSquared);
    CountingPlan plan;
    plan.mean_pairs_per_step = 100.0;
    plan.seed = 5;
    plan.schedule.n_steps = 161;
    plan.schedule.step_g1_mm = 0.05;
    plan.schedule.step_g2_mm = 0.1;
    auto rec = run_counting_scan(c, plan).to_scan_record();

    auto fit = analysis::fit_envelope_cos2(rec);
    CHECK(std::fabs(fit.period1 - 7.2) / 7.2 < 0.10);
}

TEST_CASE("background counts are added and recorded in the expectation") {
    ExperimentConfig c;
    c.kind = SetupKind::PumpIdler;
    c.transfer_scale = 1.0;
    c.grating_1 = make_grating(1.0, 0.0, MaskProfile::CosineSquared);
    c.grating_2 = make_grating(1.0, 0.0, MaskProfile::CosineSquared);
    c.pinhole_signal = {1e-6, 0.5};
    c.pinhole_idler = {1e-6, 0.5};
    CountingPlan plan;
    plan.mean_pairs_per_step = 10.0;
    plan.mean_background_per_step = 50.0;
    plan.seed = 9;
    plan.schedule.n_steps = 200;
    auto rec = run_counting_scan(c, plan);
    double total = 0.0;
    for (auto v : rec.counts) total += static_cast<double>(v);
    double avg = total / 200.0;
    CHECK(rec.expected_counts[0] == doctest::Approx(50.0).epsilon(1e-9));
    CHECK(std::fabs(avg - 50.0) < 3.0 * std::sqrt(50.0 / 200.0));
}

TEST_CASE("plan validation") {
    CountingPlan plan;
    plan.mean_pairs_per_step = 0.0;
    CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
    plan.mean_pairs_per_step = 1.0;
    plan.schedule.n_steps = 0;
    CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
}
