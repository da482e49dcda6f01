#include "qmoire/mask.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qmoire::optics {

double TransmissionMask::evaluate(double x_mm) const {
    switch (profile) {
        case MaskProfile::Open:
            return 1.0;
        case MaskProfile::CosineSquared: {
            double c = std::cos(std::numbers::pi * (x_mm - phase_offset_mm) / period_mm);
            return 1.0 - contrast + contrast * c * c;
        }
        case MaskProfile::Binary: {
            double u = (x_mm - phase_offset_mm) / period_mm;
            double d = std::fabs(u - std::round(u));  // distance to nearest slot center, in periods
            return d <= duty_cycle / 2 ? 1.0 : 1.0 - contrast;
        }
    }
    return 1.0;
}

TransmissionMask TransmissionMask::shifted(double delta_mm) const {
    TransmissionMask m = *this;
    m.phase_offset_mm += delta_mm;
    return m;
}

TransmissionMask TransmissionMask::scaled(double magnification) const {
    if (magnification == 0.0) throw std::invalid_argument("scaled: magnification must be nonzero");
    TransmissionMask m = *this;
    if (profile == MaskProfile::Open) return m;
    m.period_mm = period_mm * std::fabs(magnification);
    m.phase_offset_mm = phase_offset_mm * magnification;
    return m;
}

TransmissionMask make_grating(double period_mm, double phase_offset_mm, MaskProfile profile,
                              double contrast, double duty_cycle) {
    if (profile != MaskProfile::Open && !(period_mm > 0.0))
        throw std::invalid_argument("make_grating: period must be > 0");
    if (!(contrast >= 0.0 && contrast <= 1.0))
        throw std::invalid_argument("make_grating: contrast must be in [0, 1]");
    if (profile == MaskProfile::Binary && !(duty_cycle > 0.0 && duty_cycle < 1.0))
        throw std::invalid_argument("make_grating: duty cycle must be in (0, 1)");
    TransmissionMask m;
    m.profile = profile;
    m.period_mm = profile == MaskProfile::Open ? 0.0 : period_mm;
    m.phase_offset_mm = phase_offset_mm;
    m.contrast = contrast;
    m.duty_cycle = duty_cycle;
    return m;
}

TransmissionMask open_mask() { return TransmissionMask{}; }

std::string to_string(MaskProfile p) {
    switch (p) {
        case MaskProfile::Open: return "open";
        case MaskProfile::CosineSquared: return "cosine_squared";
        case MaskProfile::Binary: return "binary";
    }
    return "?";
}

}  // namespace qmoire::optics
