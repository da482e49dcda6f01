#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "qmoire/spectrum.hpp"

using namespace qmoire;
using namespace qmoire::analysis;

namespace {

ScanRecord sampled(double span, int n, auto fn) {
    ScanRecord rec;
    for (int k = 0; k < n; ++k) {
        double x = span * k / (n - 1);
        rec.positions_mm.push_back(x);
        rec.values.push_back(fn(x));
    }
    return rec;
}

}  // namespace

TEST_CASE("expected beat period matches the reference values to machine rounding") {
    double p = expected_beat_period(1.2, 1.6);
    CHECK(std::fabs(p - 4.8) <= 4.0 * std::numeric_limits<double>::epsilon() * 4.8);
    double q = expected_beat_period(0.8, 0.9);
    CHECK(std::fabs(q - 7.2) <= 4.0 * std::numeric_limits<double>::epsilon() * 7.2);
    CHECK(std::isinf(expected_beat_period(1.3, 1.3)));
    CHECK_THROWS_AS(expected_beat_period(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(expected_beat_period(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("beat of a two-grating product sits at the difference frequency") {
    auto rec = sampled(48.0, 961, [](double x) {
        double a = std::cos(std::numbers::pi * x / 1.2);
        double b = std::cos(std::numbers::pi * x / 1.6);
        return a * a * b * b;
    });
    auto est = beat_from_spectrum(rec);
    REQUIRE(est.detected);
    double bin = 1.0 / 48.0;
    CHECK(std::fabs(est.frequency_per_mm - 1.0 / 4.8) <= bin);
    CHECK(est.period_low_mm < 4.8);
    CHECK(est.period_high_mm > 4.8);
}

TEST_CASE("a pure tone is not reported as a beat") {
    auto rec = sampled(48.0, 961, [](double x) {
        double a = std::cos(std::numbers::pi * x / 1.6);
        return a * a;
    });
    auto est = beat_from_spectrum(rec);
    CHECK(!est.detected);
    // exactly one spectral line
    CHECK(periodogram_peaks(rec).size() == 1);
}

TEST_CASE("white noise stays below the detection threshold") {
    std::mt19937 gen(4242);
    std::normal_distribution<double> noise(0.0, 1.0);
    int detections = 0;
    const int n_seeds = 1000;
    for (int s = 0; s < n_seeds; ++s) {
        ScanRecord rec;
        for (int k = 0; k < 64; ++k) {
            rec.positions_mm.push_back(0.1 * k);
            rec.values.push_back(noise(gen));
        }
        if (beat_from_spectrum(rec).detected) ++detections;
    }
    // threshold is calibrated for a 1% family-wise level
    CHECK(detections <= 25);
}

TEST_CASE("spectrum input validation") {
    ScanRecord rec = sampled(10.0, 12, [](double x) { return std::sin(x); });
    CHECK_THROWS_AS(beat_from_spectrum(rec), std::invalid_argument);

    auto nonuniform = sampled(10.0, 32, [](double x) { return std::sin(x); });
    nonuniform.positions_mm[10] += 0.07;
    CHECK_THROWS_AS(beat_from_spectrum(nonuniform), std::invalid_argument);
}

TEST_CASE("significant lines of the product signal appear at the component frequencies") {
    auto rec = sampled(48.0, 961, [](double x) {
        double a = std::cos(std::numbers::pi * x / 1.2);
        double b = std::cos(std::numbers::pi * x / 1.6);
        return a * a * b * b;
    });
    auto peaks = periodogram_peaks(rec);
    REQUIRE(peaks.size() >= 4);
    const double expected[] = {1.0 / 4.8, 1.0 / 1.6, 1.0 / 1.2, 1.0 / 1.2 + 1.0 / 1.6};
    double bin = 1.0 / 48.0;
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(std::fabs(peaks[i].frequency_per_mm - expected[i]) <= bin);
}
