#include "qmoire/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qmoire/errors.hpp"

namespace qmoire::classical {

namespace {

// Local mask evaluation, written independently of optics::TransmissionMask
// (this module doubles as the oracle for the quantum engine).
double transmission(const optics::TransmissionMask& m, double x) {
    switch (m.profile) {
        case optics::MaskProfile::Open:
            return 1.0;
        case optics::MaskProfile::CosineSquared: {
            // keep the c*s^2 term separate: near a null the value is the tiny
            // term itself and must not come out of a cancellation
            double s = std::cos(std::numbers::pi * (x - m.phase_offset_mm) / m.period_mm);
            return (1.0 - m.contrast) + m.contrast * (s * s);
        }
        case optics::MaskProfile::Binary: {
            double u = (x - m.phase_offset_mm) / m.period_mm;
            u -= std::floor(u);  // in [0, 1)
            double dist = std::min(u, 1.0 - u);
            return dist <= m.duty_cycle / 2.0 ? 1.0 : 1.0 - m.contrast;
        }
    }
    return 1.0;
}

double finest_period(const optics::TransmissionMask& a, const optics::TransmissionMask& b) {
    double finest = std::numeric_limits<double>::infinity();
    if (!a.is_open()) finest = std::min(finest, a.period_mm);
    if (!b.is_open()) finest = std::min(finest, b.period_mm);
    return finest;
}

}  // namespace

PatternImage render_superposition(const optics::TransmissionMask& g1,
                                  const optics::TransmissionMask& g2, double relative_angle_rad,
                                  std::size_t width, std::size_t height, double pitch_mm) {
    if (width < 2 || height < 1 || !(pitch_mm > 0.0))
        throw std::invalid_argument("render_superposition: bad image dimensions");
    if (relative_angle_rad < 0.0 || relative_angle_rad > std::numbers::pi / 2.0 + 1e-12)
        throw std::invalid_argument("render_superposition: angle must be in [0, pi/2]");
    double finest = finest_period(g1, g2);
    if (std::isfinite(finest) && pitch_mm * 4.0 > finest)
        throw SamplingError("render_superposition: need at least 4 pixels per finest period");

    PatternImage img;
    img.width = width;
    img.height = height;
    img.pitch_mm = pitch_mm;
    img.pixels.resize(width * height);
    const double ca = std::cos(relative_angle_rad);
    const double sa = std::sin(relative_angle_rad);
    for (std::size_t row = 0; row < height; ++row) {
        double y = img.y_of(static_cast<double>(row));
        for (std::size_t col = 0; col < width; ++col) {
            double x = img.x_of(static_cast<double>(col));
            img.at(row, col) = transmission(g1, x) * transmission(g2, x * ca + y * sa);
        }
    }
    return img;
}

ScanRecord extract_scanline(const PatternImage& image, const ScanLine& line) {
    if (line.n_samples < 2) throw std::invalid_argument("extract_scanline: need at least 2 samples");
    double norm = std::hypot(line.dir_x, line.dir_y);
    if (std::fabs(norm - 1.0) > 1e-6)
        throw std::invalid_argument("extract_scanline: direction must be a unit vector");

    ScanRecord rec;
    rec.kind = ScanKind::AnalyticRate;
    rec.positions_mm.reserve(line.n_samples);
    rec.values.reserve(line.n_samples);
    const double wmax = static_cast<double>(image.width) - 1.0;
    const double hmax = static_cast<double>(image.height) - 1.0;
    for (int s = 0; s < line.n_samples; ++s) {
        double t = line.length_mm * static_cast<double>(s) / static_cast<double>(line.n_samples - 1);
        double x = line.start_x_mm + t * line.dir_x;
        double y = line.start_y_mm + t * line.dir_y;
        // invert the pixel-center mapping
        double col = x / image.pitch_mm + wmax / 2.0;
        double row = hmax / 2.0 - y / image.pitch_mm;
        if (col < -1e-9 || col > wmax + 1e-9 || row < -1e-9 || row > hmax + 1e-9)
            throw std::invalid_argument("extract_scanline: line leaves the image");
        col = std::clamp(col, 0.0, wmax);
        row = std::clamp(row, 0.0, hmax);
        auto c0 = static_cast<std::size_t>(col);
        auto r0 = static_cast<std::size_t>(row);
        std::size_t c1 = std::min(c0 + 1, image.width - 1);
        std::size_t r1 = std::min(r0 + 1, image.height - 1);
        double fc = col - static_cast<double>(c0);
        double fr = row - static_cast<double>(r0);
        double v = (1 - fr) * ((1 - fc) * image.at(r0, c0) + fc * image.at(r0, c1)) +
                   fr * ((1 - fc) * image.at(r1, c0) + fc * image.at(r1, c1));
        rec.positions_mm.push_back(t);
        rec.values.push_back(v);
    }
    return rec;
}

std::vector<double> aperture_convolved_product(const optics::TransmissionMask& g1_effective,
                                               const optics::TransmissionMask& g2,
                                               const optics::Aperture& pinhole_signal,
                                               const optics::Aperture& pinhole_idler,
                                               double coincidence_halfwidth_mm, double node_pitch_mm,
                                               const std::vector<double>& displacements,
                                               double step_ratio, int oversample) {
    if (!(node_pitch_mm > 0.0) || oversample < 1)
        throw std::invalid_argument("aperture_convolved_product: bad quadrature parameters");
    double lo = std::max({pinhole_signal.lo(), pinhole_idler.lo(), -coincidence_halfwidth_mm});
    double hi = std::min({pinhole_signal.hi(), pinhole_idler.hi(), coincidence_halfwidth_mm});
    if (!(hi > lo)) throw std::invalid_argument("aperture_convolved_product: empty detection window");
    double finest = finest_period(g1_effective, g2);
    if (std::isfinite(finest) && node_pitch_mm * 8.0 > finest)
        throw SamplingError("aperture_convolved_product: fewer than 8 nodes per finest period");

    auto nseg = static_cast<std::size_t>(std::ceil((hi - lo) / node_pitch_mm)) *
                static_cast<std::size_t>(oversample);
    if (nseg < 1) nseg = 1;
    const double h = (hi - lo) / static_cast<double>(nseg);

    std::vector<double> profile;
    profile.reserve(displacements.size());
    for (double s : displacements) {
        double s2 = s * step_ratio;
        double acc = 0.5 * (transmission(g1_effective, lo - s) * transmission(g2, lo - s2) +
                            transmission(g1_effective, hi - s) * transmission(g2, hi - s2));
        for (std::size_t j = 1; j < nseg; ++j) {
            double x = lo + static_cast<double>(j) * h;
            acc += transmission(g1_effective, x - s) * transmission(g2, x - s2);
        }
        profile.push_back(acc / static_cast<double>(nseg));
    }
    return profile;
}

}  // namespace qmoire::classical
