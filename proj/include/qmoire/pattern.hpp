#pragma once

#include <cstddef>
#include <vector>

#include "qmoire/mask.hpp"
#include "qmoire/scan.hpp"

namespace qmoire::classical {

/// 2-D intensity pattern, row-major, values in [0, 1]. Pixel centers sit at
/// x = (col - (width-1)/2) * pitch, y = ((height-1)/2 - row) * pitch.
struct PatternImage {
    std::size_t width = 0;
    std::size_t height = 0;
    double pitch_mm = 0.0;
    std::vector<double> pixels;

    double at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
    double& at(std::size_t row, std::size_t col) { return pixels[row * width + col]; }
    double x_of(double col) const { return (col - (static_cast<double>(width) - 1.0) / 2.0) * pitch_mm; }
    double y_of(double row) const { return ((static_cast<double>(height) - 1.0) / 2.0 - row) * pitch_mm; }
};

/// Straight sampling line across a pattern.
struct ScanLine {
    double start_x_mm = 0.0;
    double start_y_mm = 0.0;
    double dir_x = 1.0;  // unit vector
    double dir_y = 0.0;
    double length_mm = 1.0;
    int n_samples = 2;
};

/// Superpose two gratings: pixel = T1(u) * T2(u') with u the coordinate along
/// grating 1's modulation axis (horizontal) and u' along grating 2's axis
/// rotated by relative_angle. Throws SamplingError below 4 pixels per finest
/// period.
PatternImage render_superposition(const optics::TransmissionMask& g1,
                                  const optics::TransmissionMask& g2, double relative_angle_rad,
                                  std::size_t width, std::size_t height, double pitch_mm);

/// Bilinear interpolation of the pattern along the line; positions in the
/// record are distances from the line start.
ScanRecord extract_scanline(const PatternImage& image, const ScanLine& line);

/// Classical counterpart of the coincidence trace, implemented independently:
/// P(s) = window average of T1(x - s) * T2(x - s*step_ratio) over the
/// detection window (both pinholes intersected with the coincidence region),
/// by trapezoid quadrature with node spacing node_pitch/oversample anchored to
/// the window. `displacements` lists the effective grating-1 offsets s.
std::vector<double> aperture_convolved_product(const optics::TransmissionMask& g1_effective,
                                               const optics::TransmissionMask& g2,
                                               const optics::Aperture& pinhole_signal,
                                               const optics::Aperture& pinhole_idler,
                                               double coincidence_halfwidth_mm, double node_pitch_mm,
                                               const std::vector<double>& displacements,
                                               double step_ratio, int oversample = 1);

}  // namespace qmoire::classical
