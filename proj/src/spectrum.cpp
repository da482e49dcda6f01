#include "qmoire/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qmoire/fft.hpp"

namespace qmoire::analysis {

double expected_beat_period(double p1_mm, double p2_mm) {
    if (!(p1_mm > 0.0) || !(p2_mm > 0.0))
        throw std::invalid_argument("expected_beat_period: periods must be > 0");
    if (p1_mm == p2_mm) return std::numeric_limits<double>::infinity();
    return 1.0 / std::fabs(1.0 / p1_mm - 1.0 / p2_mm);
}

namespace {

constexpr int kPadFactor = 8;

struct Spectrum {
    std::vector<double> power;  // bins 0..m/2
    double df = 0.0;            // padded bin width
    double f_resolution = 0.0;  // natural resolution 1/span
};

Spectrum padded_periodogram(const ScanRecord& data, double step) {
    const std::size_t n = data.size();
    double mean = 0.0;
    for (double v : data.values) mean += v;
    mean /= static_cast<double>(n);

    std::size_t m = kPadFactor * n;
    std::vector<std::complex<double>> buf(m, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double hann = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                           static_cast<double>(n - 1));
        buf[k] = (data.values[k] - mean) * hann;
    }
    detail::fft_forward(buf);

    Spectrum s;
    s.power.resize(m / 2 + 1);
    for (std::size_t k = 0; k < s.power.size(); ++k) s.power[k] = std::norm(buf[k]);
    s.df = 1.0 / (static_cast<double>(m) * step);
    s.f_resolution = 1.0 / (static_cast<double>(n - 1) * step);
    return s;
}

double require_uniform(const ScanRecord& data, std::size_t min_points) {
    data.validate();
    if (data.size() < min_points)
        throw std::invalid_argument("spectrum: need at least " + std::to_string(min_points) + " samples");
    double step = 0.0;
    if (!data.uniform_step(step) || !(step > 0.0))
        throw std::invalid_argument("spectrum: samples must be uniformly spaced and increasing");
    return step;
}

}  // namespace

std::vector<SpectralPeak> periodogram_peaks(const ScanRecord& data) {
    double step = require_uniform(data, 16);
    Spectrum s = padded_periodogram(data, step);
    const auto& P = s.power;

    // robust noise floor: exponential null with median estimator
    std::vector<double> nondc(P.begin() + 1, P.end());
    std::nth_element(nondc.begin(), nondc.begin() + nondc.size() / 2, nondc.end());
    double median = nondc[nondc.size() / 2];
    double noise_mean = median / std::numbers::ln2;
    double threshold = noise_mean * std::log(100.0 * static_cast<double>(nondc.size()));

    std::vector<SpectralPeak> raw;
    for (std::size_t k = 2; k + 1 < P.size(); ++k) {
        double f = static_cast<double>(k) * s.df;
        if (f < 1.5 * s.f_resolution) continue;  // stay clear of the DC main lobe
        if (P[k] > P[k - 1] && P[k] >= P[k + 1] && P[k] > threshold)
            raw.push_back({f, P[k]});
    }
    if (raw.empty()) return raw;

    double strongest = 0.0;
    for (const auto& p : raw) strongest = std::max(strongest, p.power);

    // drop window sidelobes and merge maxima closer than one natural bin
    std::vector<SpectralPeak> peaks;
    for (const auto& p : raw) {
        if (p.power < 0.01 * strongest) continue;
        if (!peaks.empty() && p.frequency_per_mm - peaks.back().frequency_per_mm < s.f_resolution) {
            if (p.power > peaks.back().power) peaks.back() = p;
        } else {
            peaks.push_back(p);
        }
    }
    return peaks;
}

BeatEstimate beat_from_spectrum(const ScanRecord& data) {
    double step = require_uniform(data, 16);
    auto peaks = periodogram_peaks(data);

    BeatEstimate est;
    // a beat is a line well below the parent lines; lone tones and harmonic
    // ladders (f, 2f, ...) do not qualify
    if (peaks.size() < 2) return est;
    if (peaks[0].frequency_per_mm > 0.45 * peaks[1].frequency_per_mm) return est;

    const SpectralPeak& lowest = peaks.front();
    Spectrum s = padded_periodogram(data, step);
    auto k = static_cast<std::size_t>(std::llround(lowest.frequency_per_mm / s.df));
    double f_hat = lowest.frequency_per_mm;
    if (k >= 1 && k + 1 < s.power.size()) {
        double a = s.power[k - 1], b = s.power[k], c = s.power[k + 1];
        double denom = a - 2.0 * b + c;
        if (denom < 0.0) {
            double delta = 0.5 * (a - c) / denom;
            f_hat = (static_cast<double>(k) + delta) * s.df;
        }
    }

    est.detected = true;
    est.frequency_per_mm = f_hat;
    est.period_mm = 1.0 / f_hat;
    double half_bin = 0.5 * s.f_resolution;
    est.period_low_mm = 1.0 / (f_hat + half_bin);
    est.period_high_mm = f_hat - half_bin > 0.0 ? 1.0 / (f_hat - half_bin)
                                                : std::numeric_limits<double>::infinity();
    return est;
}

}  // namespace qmoire::analysis
