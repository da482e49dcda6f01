#pragma once

#include <string>
#include <vector>

#include "qmoire/grid.hpp"
#include "qmoire/mask.hpp"
#include "qmoire/scan.hpp"

namespace qmoire::twin {

/// Which arm carries the first grating: the pump (its pattern is transferred to
/// the correlations with a wavelength-dependent scale) or the signal arm.
enum class SetupKind { PumpIdler, SignalIdler };

/// Joint displacement schedule for the two gratings. Grating i sits at
/// start_i + k * step_i at step k.
struct ScanSchedule {
    int n_steps = 1;
    double step_g1_mm = 0.0;
    double step_g2_mm = 0.0;
    double start_g1_mm = 0.0;
    double start_g2_mm = 0.0;

    double g1_displacement(int k) const { return start_g1_mm + k * step_g1_mm; }
    double g2_displacement(int k) const { return start_g2_mm + k * step_g2_mm; }

    void validate() const {
        if (n_steps < 1) throw std::invalid_argument("ScanSchedule: n_steps must be >= 1");
    }
};

/// Geometry, wavelengths, masks and detection windows for one experiment.
struct ExperimentConfig {
    SetupKind kind = SetupKind::PumpIdler;
    optics::TransmissionMask grating_1;
    optics::TransmissionMask grating_2;
    double transfer_scale = 2.0;  // pump-to-correlation image scale (PumpIdler)
    optics::Aperture pinhole_signal{0.5, 0.0};
    optics::Aperture pinhole_idler{0.5, 0.0};
    double lambda_pump_nm = 425.0;
    double lambda_signal_nm = 890.0;
    double lambda_idler_nm = 810.0;
    double focal_length_mm = 250.0;
    double coincidence_halfwidth_mm = 1.0;
    optics::SpatialGrid grid = optics::SpatialGrid::centered(4096, 0.01);
    bool invert_images = true;  // each single-lens relay images at m = -1

    /// Scale applied to grating 1 to obtain its effective pattern in the
    /// correlation coordinate: transfer_scale for PumpIdler, the relay
    /// magnification (+-1) for SignalIdler.
    double effective_g1_scale() const;

    /// Detection window: intersection of both pinholes with the coincidence
    /// region. Throws when empty.
    void detection_window(double& lo, double& hi) const;

    /// Hard constraint checks (throws std::invalid_argument); returns
    /// soft warnings such as energy-conservation mismatch of the wavelengths.
    std::vector<std::string> validate() const;
};

/// Effective correlation modulation produced by the pump grating (Setup 1):
/// grating 1 magnified by the transfer scale.
optics::TransmissionMask effective_mask_setup1(const ExperimentConfig& config);

/// Normalized coincidence rate for grating displacements (delta_g1, delta_g2):
/// the detection-window average of T1_eff * T2, equal to 1 when both masks are
/// open. Throws SamplingError when the grid resolves the finest effective
/// period with fewer than 8 samples.
double coincidence_rate(const ExperimentConfig& config, double delta_g1_mm, double delta_g2_mm);

/// Scan following the schedule; sample k is taken at scan position
/// start_g2 + k*step_g2 with both gratings displaced per the schedule.
ScanRecord run_scan(const ExperimentConfig& config, const ScanSchedule& schedule);

/// Composed imaging chain of the signal-idler setup (one detector acting as a
/// point-like source): unit-magnitude magnifications from grating 1's plane to
/// grating 2's plane and from the superposition plane to the detector.
struct KlyshkoMap {
    double mag_g1_to_g2 = -1.0;
    double mag_product_to_detector = -1.0;
};
KlyshkoMap klyshko_chain(const ExperimentConfig& config);

/// Grating 1 under collimated Gaussian illumination on the config grid at the
/// signal wavelength: amplitude sqrt(T1(x)) * exp(-x^2 / (2 waist^2)). The
/// collimation of the point-like source is represented by the waist.
optics::FieldGrid illuminated_g1_field(const ExperimentConfig& config, double illum_waist_mm = 3.0);

/// Fresnel realization of the grating-1 imaging leg: the illuminated grating
/// relayed through the 2f-2f single-lens chain. Agrees with
/// ideal_image(illuminated_g1_field(...), -1) up to the image-plane quadratic
/// phase, so intensities match.
optics::FieldGrid klyshko_image_fresnel(const ExperimentConfig& config, double illum_waist_mm = 3.0);

}  // namespace qmoire::twin
