#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qmoire/experiment.hpp"
#include "qmoire/fit.hpp"
#include "qmoire/spectrum.hpp"

using namespace qmoire;
using namespace qmoire::analysis;

namespace {

double cos2(double x, double phase, double period) {
    double c = std::cos(std::numbers::pi * (x - phase) / period);
    return c * c;
}

ScanRecord product_record(double A, double B, double p1, double p2, double f1, double f2,
                          double span, int n) {
    ScanRecord rec;
    for (int k = 0; k < n; ++k) {
        double x = span * k / (n - 1);
        rec.positions_mm.push_back(x);
        rec.values.push_back(B + A * cos2(x, f1, p1) * cos2(x, f2, p2));
    }
    return rec;
}

ScanRecord envelope_record(double A, double B, double P, double f, double span, int n) {
    ScanRecord rec;
    for (int k = 0; k < n; ++k) {
        double x = span * k / (n - 1);
        rec.positions_mm.push_back(x);
        rec.values.push_back(B + A * cos2(x, f, P));
    }
    return rec;
}

ScanRecord run_b_trace() {
    twin::ExperimentConfig c;
    c.kind = twin::SetupKind::PumpIdler;
    c.grating_1 = optics::make_grating(0.4, 0.0, optics::MaskProfile::CosineSquared);
    c.grating_2 = optics::make_grating(0.9, 0.0, optics::MaskProfile::CosineSquared);
    twin::ScanSchedule s;
    s.n_steps = 161;
    s.step_g1_mm = 0.05;
    s.step_g2_mm = 0.1;
    return twin::run_scan(c, s);
}

}  // namespace

TEST_CASE("product fit recovers noiseless parameters from a +-10% start") {
    // 6 mm span keeps a 10%-off period inside the correct basin
    std::mt19937 gen(314159);
    std::uniform_real_distribution<double> wiggle(-0.10, 0.10);
    const double true_params[6] = {1.0, 0.1, 1.2, 1.6, 0.3, -0.2};
    auto rec = product_record(1.0, 0.1, 1.2, 1.6, 0.3, -0.2, 6.0, 49);
    for (int trial = 0; trial < 20; ++trial) {
        FitInit init;
        init.amplitude = true_params[0] * (1 + wiggle(gen));
        init.offset = true_params[1] * (1 + wiggle(gen));
        init.period1 = true_params[2] * (1 + wiggle(gen));
        init.period2 = true_params[3] * (1 + wiggle(gen));
        init.phase1 = true_params[4] * (1 + wiggle(gen));
        init.phase2 = true_params[5] * (1 + wiggle(gen));
        auto fit = fit_product_cos2(rec, init);
        REQUIRE(fit.converged);
        CHECK(std::fabs(fit.period1 - 1.2) / 1.2 < 1e-6);
        CHECK(std::fabs(fit.period2 - 1.6) / 1.6 < 1e-6);
    }
}

TEST_CASE("constant data is flagged non-identifiable without exceptions") {
    ScanRecord rec;
    for (int k = 0; k < 32; ++k) {
        rec.positions_mm.push_back(0.1 * k);
        rec.values.push_back(0.42);
    }
    auto fit = fit_product_cos2(rec);
    CHECK(!fit.identifiable);
    CHECK(!fit.converged);
    CHECK(fit.offset == doctest::Approx(0.42).epsilon(1e-12));

    auto env = fit_envelope_cos2(rec);
    CHECK(!env.identifiable);
}

TEST_CASE("zero-amplitude envelope data is flagged non-identifiable") {
    auto rec = envelope_record(0.0, 0.3, 7.8, 0.0, 20.0, 64);
    auto fit = fit_envelope_cos2(rec);
    CHECK(!fit.identifiable);
}

TEST_CASE("envelope fit recovers a synthetic slow period from a coarse start") {
    auto rec = envelope_record(0.8, 0.05, 7.8, 1.1, 31.2, 105);
    FitInit init;
    init.period1 = 7.0;
    auto fit = fit_envelope_cos2(rec, init);
    REQUIRE(fit.converged);
    CHECK(std::fabs(fit.period1 - 7.8) / 7.8 < 1e-6);
}

TEST_CASE("envelope fit on the similar-period scan lands near the expected beat") {
    auto rec = run_b_trace();
    auto raw = fit_envelope_cos2(rec);
    REQUIRE(raw.converged);
    CHECK(std::fabs(raw.period1 - 7.2) / 7.2 < 0.02);

    // decimated route, window = the effective grating-1 period
    FitOptions opt;
    opt.fast_period_hint_mm = 0.8;
    auto dec = fit_envelope_cos2(rec, {}, opt);
    CHECK(std::fabs(dec.period1 - 7.2) / 7.2 < 0.02);
}

TEST_CASE("amplitude scaling leaves periods and phases fixed") {
    auto rec = product_record(0.9, 0.2, 1.2, 1.6, 0.25, 0.6, 12.0, 97);
    auto base = fit_product_cos2(rec);
    REQUIRE(base.converged);

    const double c = 37.5;
    ScanRecord scaled = rec;
    for (auto& v : scaled.values) v *= c;
    auto fit = fit_product_cos2(scaled);
    REQUIRE(fit.converged);
    CHECK(fit.amplitude == doctest::Approx(c * base.amplitude).epsilon(1e-9));
    CHECK(fit.offset == doctest::Approx(c * base.offset).epsilon(1e-7));
    CHECK(fit.period1 == doctest::Approx(base.period1).epsilon(1e-9));
    CHECK(fit.period2 == doctest::Approx(base.period2).epsilon(1e-9));
    CHECK(fit.phase1 == doctest::Approx(base.phase1).epsilon(1e-7));
    CHECK(fit.phase2 == doctest::Approx(base.phase2).epsilon(1e-7));
}

TEST_CASE("translating positions shifts phases modulo the period") {
    auto rec = product_record(1.0, 0.1, 1.2, 1.6, 0.3, 0.5, 12.0, 97);
    auto base = fit_product_cos2(rec);
    REQUIRE(base.converged);

    const double delta = 2.3;
    ScanRecord moved = rec;
    for (auto& x : moved.positions_mm) x += delta;
    auto fit = fit_product_cos2(moved);
    REQUIRE(fit.converged);
    CHECK(fit.period1 == doctest::Approx(base.period1).epsilon(1e-8));
    CHECK(fit.period2 == doctest::Approx(base.period2).epsilon(1e-8));
    auto wrap = [](double v, double p) { return v - p * std::round(v / p); };
    CHECK(wrap(fit.phase1 - base.phase1 - delta, fit.period1) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(wrap(fit.phase2 - base.phase2 - delta, fit.period2) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("product and envelope views of the same beat agree") {
    // product fit on the Run A trace vs envelope fit of its slow modulation
    twin::ExperimentConfig c;
    c.kind = twin::SetupKind::PumpIdler;
    c.grating_1 = optics::make_grating(0.8, 0.0, optics::MaskProfile::CosineSquared);
    c.grating_2 = optics::make_grating(1.2, 0.0, optics::MaskProfile::CosineSquared);
    twin::ScanSchedule s;
    s.n_steps = 121;
    s.step_g1_mm = 0.1;
    s.step_g2_mm = 0.2;
    auto rec = twin::run_scan(c, s);

    auto prod = fit_product_cos2(rec);
    REQUIRE(prod.converged);
    double beat = expected_beat_period(prod.period1, prod.period2);

    FitOptions opt;
    opt.fast_period_hint_mm = 1.6;
    auto env = fit_envelope_cos2(rec, {}, opt);
    CHECK(std::fabs(env.period1 - beat) / beat < 0.02);
}

TEST_CASE("generate-then-fit closure on random instances") {
    std::mt19937 gen(8675309);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int checked = 0;
    while (checked < 25) {
        double p1 = 0.6 + 1.8 * unif(gen);
        double p2 = 0.6 + 1.8 * unif(gen);
        if (std::fabs(1.0 / p1 - 1.0 / p2) < 1.0 / 8.0) continue;  // resolvable beat
        double A = 0.5 + 1.5 * unif(gen);
        double B = 0.5 * unif(gen);
        double f1 = p1 * unif(gen);
        double f2 = p2 * unif(gen);
        auto rec = product_record(A, B, p1, p2, f1, f2, 24.0, 241);
        auto fit = fit_product_cos2(rec);
        REQUIRE(fit.converged);
        double lo = std::min(fit.period1, fit.period2), hi = std::max(fit.period1, fit.period2);
        CHECK(std::fabs(lo - std::min(p1, p2)) / std::min(p1, p2) < 1e-5);
        CHECK(std::fabs(hi - std::max(p1, p2)) / std::max(p1, p2) < 1e-5);
        CHECK(std::fabs(fit.amplitude - A) / A < 1e-5);
        CHECK(std::fabs(fit.offset - B) < 1e-5 * std::max(1.0, B));
        ++checked;
    }
}

TEST_CASE("fit input validation") {
    ScanRecord tiny;
    for (int k = 0; k < 5; ++k) {
        tiny.positions_mm.push_back(k);
        tiny.values.push_back(k % 2);
    }
    CHECK_THROWS_AS(fit_product_cos2(tiny), std::invalid_argument);

    auto rec = product_record(1, 0, 1.2, 1.6, 0, 0, 10.0, 64);
    FitInit bad;
    bad.period1 = -1.0;
    CHECK_THROWS_AS(fit_product_cos2(rec, bad), std::invalid_argument);

    ScanRecord unsorted = rec;
    std::swap(unsorted.positions_mm[3], unsorted.positions_mm[4]);
    CHECK_THROWS_AS(fit_product_cos2(unsorted), std::invalid_argument);
}
