#pragma once

#include <vector>

#include "qmoire/scan.hpp"

namespace qmoire::analysis {

/// Moire beat period of two superposed periodic structures:
/// 1/P = |1/p1 - 1/p2|. Returns +infinity for equal periods.
double expected_beat_period(double p1_mm, double p2_mm);

/// One significant periodogram line.
struct SpectralPeak {
    double frequency_per_mm = 0.0;
    double power = 0.0;
};

/// Significant non-DC lines of the Hann-windowed, zero-padded periodogram,
/// sorted by frequency. A line must be a local maximum, exceed the
/// noise-floor threshold (Fisher-style, 1% family-wise level on white noise)
/// and carry at least 1% of the strongest line's power.
std::vector<SpectralPeak> periodogram_peaks(const ScanRecord& data);

struct BeatEstimate {
    bool detected = false;
    double period_mm = 0.0;
    double period_low_mm = 0.0;   // CI from +- half a natural resolution bin
    double period_high_mm = 0.0;
    double frequency_per_mm = 0.0;
};

/// Beat-period estimate: the lowest-frequency significant line, refined by
/// quadratic interpolation of the periodogram peak. A beat requires at least
/// two significant lines (a lone line is just a single periodicity), so pure
/// tones and noise report detected = false. Requires >= 16 uniformly spaced
/// samples.
BeatEstimate beat_from_spectrum(const ScanRecord& data);

}  // namespace qmoire::analysis
