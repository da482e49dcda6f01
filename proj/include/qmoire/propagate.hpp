#pragma once

#include "qmoire/grid.hpp"

namespace qmoire::optics {

/// Aberration-free imaging with signed magnification m != 0:
/// u'(x) = u(x/m) / sqrt(|m|) on a grid with pitch scaled by |m|.
/// Negative m reflects the field about the origin. Conserves energy.
FieldGrid ideal_image(const FieldGrid& field, double magnification);

/// Paraxial free-space transfer over `distance` (spectral method, carrier phase
/// e^{ikz} omitted). Requires pitch^2 >= lambda*|distance|/n_points, otherwise
/// the quadratic phase aliases and a SamplingError is thrown. distance = 0
/// returns the input unchanged.
FieldGrid fresnel_propagate(const FieldGrid& field, double distance_mm);

/// Thin-lens phase exp(-i pi x^2 / (lambda f)). Infinite focal length is the
/// identity. Pure phase, conserves |u|^2 pointwise.
FieldGrid thin_lens(const FieldGrid& field, double focal_length_mm);

/// Single-lens relay: propagate 2f, lens f, propagate 2f. Images at m = -1
/// (the field additionally carries the standard image-plane quadratic phase,
/// which drops out of intensities).
FieldGrid relay_2f2f(const FieldGrid& field, double focal_length_mm);

}  // namespace qmoire::optics
