#include "qmoire/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qmoire/errors.hpp"
#include "qmoire/propagate.hpp"

namespace qmoire::twin {

double ExperimentConfig::effective_g1_scale() const {
    if (kind == SetupKind::PumpIdler) return transfer_scale;
    return invert_images ? -1.0 : 1.0;
}

void ExperimentConfig::detection_window(double& lo, double& hi) const {
    lo = std::max({pinhole_signal.lo(), pinhole_idler.lo(), -coincidence_halfwidth_mm});
    hi = std::min({pinhole_signal.hi(), pinhole_idler.hi(), coincidence_halfwidth_mm});
    if (!(hi > lo))
        throw std::invalid_argument("ExperimentConfig: empty detection window (pinholes and coincidence region do not overlap)");
}

std::vector<std::string> ExperimentConfig::validate() const {
    grid.validate();
    if (!(transfer_scale > 0.0)) throw std::invalid_argument("ExperimentConfig: transfer scale must be > 0");
    if (!(lambda_pump_nm > 0.0 && lambda_signal_nm > 0.0 && lambda_idler_nm > 0.0))
        throw std::invalid_argument("ExperimentConfig: wavelengths must be > 0");
    if (!(coincidence_halfwidth_mm > 0.0))
        throw std::invalid_argument("ExperimentConfig: coincidence region half-width must be > 0");
    if (!(pinhole_signal.diameter_mm > 0.0 && pinhole_idler.diameter_mm > 0.0))
        throw std::invalid_argument("ExperimentConfig: pinhole diameters must be > 0");
    double lo, hi;
    detection_window(lo, hi);

    std::vector<std::string> warnings;
    double lhs = 1.0 / lambda_pump_nm;
    double rhs = 1.0 / lambda_signal_nm + 1.0 / lambda_idler_nm;
    if (std::fabs(lhs - rhs) > 0.01 * lhs) {
        warnings.push_back("wavelengths violate 1/lambda_pump = 1/lambda_signal + 1/lambda_idler by more than 1%");
    }
    return warnings;
}

optics::TransmissionMask effective_mask_setup1(const ExperimentConfig& config) {
    if (config.kind != SetupKind::PumpIdler)
        throw std::invalid_argument("effective_mask_setup1: config is not a pump-idler setup");
    return config.grating_1.scaled(config.transfer_scale);
}

namespace {

// Trapezoid average of T1eff * T2 over [lo, hi] with node spacing <= `pitch`.
// Node placement is anchored to the window so that refining the spacing
// converges; shared convention with the classical cross-check.
double window_average(const optics::TransmissionMask& t1, const optics::TransmissionMask& t2,
                      double lo, double hi, double pitch) {
    auto nseg = static_cast<std::size_t>(std::ceil((hi - lo) / pitch));
    if (nseg < 1) nseg = 1;
    double h = (hi - lo) / static_cast<double>(nseg);
    double acc = 0.5 * (t1(lo) * t2(lo) + t1(hi) * t2(hi));
    for (std::size_t j = 1; j < nseg; ++j) {
        double x = lo + static_cast<double>(j) * h;
        acc += t1(x) * t2(x);
    }
    return acc / static_cast<double>(nseg);
}

void check_resolution(const ExperimentConfig& config, const optics::TransmissionMask& t1eff) {
    double finest = std::numeric_limits<double>::infinity();
    if (!t1eff.is_open()) finest = std::min(finest, t1eff.period_mm);
    if (!config.grating_2.is_open()) finest = std::min(finest, config.grating_2.period_mm);
    if (std::isfinite(finest) && config.grid.pitch_mm * 8.0 > finest)
        throw SamplingError("coincidence_rate: fewer than 8 grid samples per finest effective period");
}

}  // namespace

double coincidence_rate(const ExperimentConfig& config, double delta_g1_mm, double delta_g2_mm) {
    double scale = config.effective_g1_scale();
    optics::TransmissionMask t1eff = config.grating_1.shifted(delta_g1_mm).scaled(scale);
    optics::TransmissionMask t2 = config.grating_2.shifted(delta_g2_mm);
    check_resolution(config, t1eff);
    double lo, hi;
    config.detection_window(lo, hi);
    return window_average(t1eff, t2, lo, hi, config.grid.pitch_mm);
}

ScanRecord run_scan(const ExperimentConfig& config, const ScanSchedule& schedule) {
    schedule.validate();
    ScanRecord rec;
    rec.kind = ScanKind::AnalyticRate;
    rec.positions_mm.reserve(schedule.n_steps);
    rec.values.reserve(schedule.n_steps);
    for (int k = 0; k < schedule.n_steps; ++k) {
        rec.positions_mm.push_back(schedule.g2_displacement(k));
        rec.values.push_back(coincidence_rate(config, schedule.g1_displacement(k), schedule.g2_displacement(k)));
    }
    return rec;
}

KlyshkoMap klyshko_chain(const ExperimentConfig& config) {
    if (config.kind != SetupKind::SignalIdler)
        throw std::invalid_argument("klyshko_chain: config is not a signal-idler setup");
    double m = config.invert_images ? -1.0 : 1.0;
    return KlyshkoMap{m, m};
}

optics::FieldGrid illuminated_g1_field(const ExperimentConfig& config, double illum_waist_mm) {
    if (!(illum_waist_mm > 0.0)) throw std::invalid_argument("illuminated_g1_field: waist must be > 0");
    optics::FieldGrid field;
    field.grid = config.grid;
    field.wavelength_nm = config.lambda_signal_nm;
    field.amplitudes.resize(config.grid.n_points);
    for (std::size_t k = 0; k < config.grid.n_points; ++k) {
        double x = config.grid.coordinate(k);
        double env = std::exp(-x * x / (2.0 * illum_waist_mm * illum_waist_mm));
        field.amplitudes[k] = std::sqrt(config.grating_1(x)) * env;
    }
    return field;
}

optics::FieldGrid klyshko_image_fresnel(const ExperimentConfig& config, double illum_waist_mm) {
    if (config.kind != SetupKind::SignalIdler)
        throw std::invalid_argument("klyshko_image_fresnel: config is not a signal-idler setup");
    return optics::relay_2f2f(illuminated_g1_field(config, illum_waist_mm), config.focal_length_mm);
}

}  // namespace qmoire::twin
