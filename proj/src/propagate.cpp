#include "qmoire/propagate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qmoire/errors.hpp"
#include "qmoire/fft.hpp"

namespace qmoire::optics {

FieldGrid ideal_image(const FieldGrid& field, double magnification) {
    field.validate();
    if (magnification == 0.0) throw std::invalid_argument("ideal_image: magnification must be nonzero");
    const double am = std::fabs(magnification);
    const double gain = 1.0 / std::sqrt(am);
    const std::size_t n = field.grid.n_points;

    FieldGrid out = field;
    out.grid.pitch_mm = field.grid.pitch_mm * am;
    if (magnification > 0.0) {
        out.grid.origin_mm = field.grid.origin_mm * magnification;
        for (std::size_t k = 0; k < n; ++k) out.amplitudes[k] = field.amplitudes[k] * gain;
    } else {
        // image of [x0, x_{n-1}] is [m x_{n-1}, m x0]; samples come out reversed
        out.grid.origin_mm = magnification * field.grid.coordinate(n - 1);
        for (std::size_t k = 0; k < n; ++k) out.amplitudes[k] = field.amplitudes[n - 1 - k] * gain;
    }
    return out;
}

FieldGrid fresnel_propagate(const FieldGrid& field, double distance_mm) {
    field.validate();
    if (distance_mm == 0.0) return field;

    const double lambda = field.wavelength_mm();
    const double pitch = field.grid.pitch_mm;
    const std::size_t n = field.grid.n_points;
    // band limit of the sampled transfer-function chirp
    if (pitch * pitch < lambda * std::fabs(distance_mm) / static_cast<double>(n)) {
        throw SamplingError("fresnel_propagate: pitch^2 < lambda*distance/n_points; refine the grid or shorten the step");
    }

    FieldGrid out = field;
    detail::fft_forward(out.amplitudes);
    const auto freqs = detail::fft_frequencies(n, pitch);
    for (std::size_t k = 0; k < n; ++k) {
        double phase = -std::numbers::pi * lambda * distance_mm * freqs[k] * freqs[k];
        out.amplitudes[k] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
    detail::fft_inverse(out.amplitudes);
    return out;
}

FieldGrid thin_lens(const FieldGrid& field, double focal_length_mm) {
    field.validate();
    if (focal_length_mm == 0.0) throw std::invalid_argument("thin_lens: focal length must be nonzero");
    if (std::isinf(focal_length_mm)) return field;

    const double lambda = field.wavelength_mm();
    FieldGrid out = field;
    for (std::size_t k = 0; k < field.grid.n_points; ++k) {
        double x = field.grid.coordinate(k);
        double phase = -std::numbers::pi * x * x / (lambda * focal_length_mm);
        out.amplitudes[k] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return out;
}

FieldGrid relay_2f2f(const FieldGrid& field, double focal_length_mm) {
    FieldGrid u = fresnel_propagate(field, 2.0 * focal_length_mm);
    u = thin_lens(u, focal_length_mm);
    return fresnel_propagate(u, 2.0 * focal_length_mm);
}

}  // namespace qmoire::optics
