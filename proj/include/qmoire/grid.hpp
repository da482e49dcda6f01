#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qmoire::optics {

/// Uniform 1-D sample grid along the transverse coordinate. Lengths in mm.
struct SpatialGrid {
    std::size_t n_points = 2;
    double pitch_mm = 1.0;
    double origin_mm = 0.0;

    /// Grid of n points symmetric about x = 0 (sample n/2 sits exactly at 0).
    static SpatialGrid centered(std::size_t n, double pitch) {
        SpatialGrid g{n, pitch, -static_cast<double>(n / 2) * pitch};
        g.validate();
        return g;
    }

    double coordinate(std::size_t k) const { return origin_mm + static_cast<double>(k) * pitch_mm; }
    double span_mm() const { return static_cast<double>(n_points - 1) * pitch_mm; }

    void validate() const {
        if (n_points < 2) throw std::invalid_argument("SpatialGrid: n_points must be >= 2");
        if (!(pitch_mm > 0.0)) throw std::invalid_argument("SpatialGrid: pitch must be > 0");
    }
};

/// Sampled complex optical field. Wavelength in nm, grid in mm.
struct FieldGrid {
    SpatialGrid grid;
    std::vector<std::complex<double>> amplitudes;
    double wavelength_nm = 500.0;

    double wavelength_mm() const { return wavelength_nm * 1e-6; }

    /// Total power measure: sum |u|^2 * pitch.
    double energy() const {
        double e = 0.0;
        for (const auto& a : amplitudes) e += std::norm(a);
        return e * grid.pitch_mm;
    }

    void validate() const {
        grid.validate();
        if (amplitudes.size() != grid.n_points)
            throw std::invalid_argument("FieldGrid: amplitude count does not match grid");
        if (!(wavelength_nm > 0.0)) throw std::invalid_argument("FieldGrid: wavelength must be > 0");
    }
};

}  // namespace qmoire::optics
