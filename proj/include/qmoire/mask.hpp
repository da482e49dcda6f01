#pragma once

#include <string>

namespace qmoire::optics {

enum class MaskProfile { Open, CosineSquared, Binary };

/// 1-D intensity transmission of a grating or open aperture.
///
/// CosineSquared: T(x) = 1 - contrast + contrast * cos^2(pi (x - phase) / period).
/// Binary: open slot of width duty_cycle*period centered on each multiple of the
/// period (counted from phase_offset); T = 1 inside, 1 - contrast outside.
/// Open: T(x) = 1 everywhere.
struct TransmissionMask {
    MaskProfile profile = MaskProfile::Open;
    double period_mm = 0.0;  // unused for Open
    double phase_offset_mm = 0.0;
    double contrast = 1.0;   // in [0, 1]
    double duty_cycle = 0.5; // Binary only, in (0, 1)

    double evaluate(double x_mm) const;
    double operator()(double x_mm) const { return evaluate(x_mm); }

    /// Pattern translated by delta: shifted(x) = original(x - delta).
    TransmissionMask shifted(double delta_mm) const;

    /// Pattern magnified about the origin: scaled(x) = original(x / m).
    /// Negative m reflects the pattern (image inversion).
    TransmissionMask scaled(double magnification) const;

    bool is_open() const { return profile == MaskProfile::Open; }
};

/// Validated grating constructor. Throws std::invalid_argument on bad parameters.
TransmissionMask make_grating(double period_mm, double phase_offset_mm, MaskProfile profile,
                              double contrast = 1.0, double duty_cycle = 0.5);

TransmissionMask open_mask();

/// Circular detector pinhole reduced to its 1-D trace.
struct Aperture {
    double diameter_mm = 0.5;
    double center_mm = 0.0;

    bool contains(double x_mm) const {
        double r = x_mm - center_mm;
        return r >= -diameter_mm / 2 && r <= diameter_mm / 2;
    }
    double lo() const { return center_mm - diameter_mm / 2; }
    double hi() const { return center_mm + diameter_mm / 2; }
};

std::string to_string(MaskProfile p);

}  // namespace qmoire::optics
