#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmoire/config.hpp"
#include "qmoire/errors.hpp"
#include "qmoire/fit.hpp"
#include "qmoire/pattern.hpp"
#include "qmoire/photocount.hpp"
#include "qmoire/propagate.hpp"
#include "qmoire/runner.hpp"
#include "qmoire/spectrum.hpp"

namespace py = pybind11;
using namespace qmoire;

namespace {

py::array_t<double> image_array(const classical::PatternImage& img) {
    py::array_t<double> arr({img.height, img.width});
    auto view = arr.mutable_unchecked<2>();
    for (std::size_t r = 0; r < img.height; ++r)
        for (std::size_t c = 0; c < img.width; ++c) view(r, c) = img.at(r, c);
    return arr;
}

harness::RunSetup preset_by_name(const std::string& name) {
    auto preset = harness::preset_from_string(name);
    if (!preset) throw std::invalid_argument("unknown preset: " + name);
    return harness::make_preset(*preset);
}

}  // namespace

PYBIND11_MODULE(_qmoire, m) {
    m.doc() = "Twin-photon moire scan simulation and fringe analysis";
    m.attr("__version__") = "0.1.0";

    py::register_exception<SamplingError>(m, "SamplingError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::enum_<optics::MaskProfile>(m, "MaskProfile")
        .value("OPEN", optics::MaskProfile::Open)
        .value("COSINE_SQUARED", optics::MaskProfile::CosineSquared)
        .value("BINARY", optics::MaskProfile::Binary);

    py::class_<optics::TransmissionMask>(m, "TransmissionMask")
        .def(py::init<>())
        .def_readwrite("profile", &optics::TransmissionMask::profile)
        .def_readwrite("period_mm", &optics::TransmissionMask::period_mm)
        .def_readwrite("phase_offset_mm", &optics::TransmissionMask::phase_offset_mm)
        .def_readwrite("contrast", &optics::TransmissionMask::contrast)
        .def_readwrite("duty_cycle", &optics::TransmissionMask::duty_cycle)
        .def("evaluate", &optics::TransmissionMask::evaluate, py::arg("x_mm"))
        .def("__call__", &optics::TransmissionMask::evaluate, py::arg("x_mm"))
        .def("shifted", &optics::TransmissionMask::shifted, py::arg("delta_mm"))
        .def("scaled", &optics::TransmissionMask::scaled, py::arg("magnification"))
        .def("is_open", &optics::TransmissionMask::is_open);

    m.def("make_grating", &optics::make_grating, py::arg("period_mm"), py::arg("phase_offset_mm"),
          py::arg("profile"), py::arg("contrast") = 1.0, py::arg("duty_cycle") = 0.5);
    m.def("open_mask", &optics::open_mask);

    py::class_<optics::Aperture>(m, "Aperture")
        .def(py::init<double, double>(), py::arg("diameter_mm"), py::arg("center_mm") = 0.0)
        .def_readwrite("diameter_mm", &optics::Aperture::diameter_mm)
        .def_readwrite("center_mm", &optics::Aperture::center_mm)
        .def("contains", &optics::Aperture::contains, py::arg("x_mm"));

    py::class_<optics::SpatialGrid>(m, "SpatialGrid")
        .def_static("centered", &optics::SpatialGrid::centered, py::arg("n_points"), py::arg("pitch_mm"))
        .def_readwrite("n_points", &optics::SpatialGrid::n_points)
        .def_readwrite("pitch_mm", &optics::SpatialGrid::pitch_mm)
        .def_readwrite("origin_mm", &optics::SpatialGrid::origin_mm)
        .def("coordinate", &optics::SpatialGrid::coordinate, py::arg("k"));

    py::enum_<ScanKind>(m, "ScanKind")
        .value("ANALYTIC_RATE", ScanKind::AnalyticRate)
        .value("COUNTS", ScanKind::Counts);

    py::class_<ScanRecord>(m, "ScanRecord")
        .def(py::init<>())
        .def_readwrite("positions_mm", &ScanRecord::positions_mm)
        .def_readwrite("values", &ScanRecord::values)
        .def_readwrite("kind", &ScanRecord::kind)
        .def("__len__", &ScanRecord::size);

    py::enum_<twin::SetupKind>(m, "SetupKind")
        .value("PUMP_IDLER", twin::SetupKind::PumpIdler)
        .value("SIGNAL_IDLER", twin::SetupKind::SignalIdler);

    py::class_<twin::ScanSchedule>(m, "ScanSchedule")
        .def(py::init<>())
        .def_readwrite("n_steps", &twin::ScanSchedule::n_steps)
        .def_readwrite("step_g1_mm", &twin::ScanSchedule::step_g1_mm)
        .def_readwrite("step_g2_mm", &twin::ScanSchedule::step_g2_mm)
        .def_readwrite("start_g1_mm", &twin::ScanSchedule::start_g1_mm)
        .def_readwrite("start_g2_mm", &twin::ScanSchedule::start_g2_mm);

    py::class_<twin::ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("kind", &twin::ExperimentConfig::kind)
        .def_readwrite("grating_1", &twin::ExperimentConfig::grating_1)
        .def_readwrite("grating_2", &twin::ExperimentConfig::grating_2)
        .def_readwrite("transfer_scale", &twin::ExperimentConfig::transfer_scale)
        .def_readwrite("pinhole_signal", &twin::ExperimentConfig::pinhole_signal)
        .def_readwrite("pinhole_idler", &twin::ExperimentConfig::pinhole_idler)
        .def_readwrite("lambda_pump_nm", &twin::ExperimentConfig::lambda_pump_nm)
        .def_readwrite("lambda_signal_nm", &twin::ExperimentConfig::lambda_signal_nm)
        .def_readwrite("lambda_idler_nm", &twin::ExperimentConfig::lambda_idler_nm)
        .def_readwrite("focal_length_mm", &twin::ExperimentConfig::focal_length_mm)
        .def_readwrite("coincidence_halfwidth_mm", &twin::ExperimentConfig::coincidence_halfwidth_mm)
        .def_readwrite("grid", &twin::ExperimentConfig::grid)
        .def_readwrite("invert_images", &twin::ExperimentConfig::invert_images)
        .def("effective_g1_scale", &twin::ExperimentConfig::effective_g1_scale)
        .def("validate", &twin::ExperimentConfig::validate);

    m.def("effective_mask_setup1", &twin::effective_mask_setup1, py::arg("config"));
    m.def("coincidence_rate", &twin::coincidence_rate, py::arg("config"), py::arg("delta_g1_mm"),
          py::arg("delta_g2_mm"));
    m.def("run_scan", &twin::run_scan, py::arg("config"), py::arg("schedule"));

    py::class_<twin::KlyshkoMap>(m, "KlyshkoMap")
        .def_readonly("mag_g1_to_g2", &twin::KlyshkoMap::mag_g1_to_g2)
        .def_readonly("mag_product_to_detector", &twin::KlyshkoMap::mag_product_to_detector);
    m.def("klyshko_chain", &twin::klyshko_chain, py::arg("config"));

    py::class_<photocount::CountingPlan>(m, "CountingPlan")
        .def(py::init<>())
        .def_readwrite("mean_pairs_per_step", &photocount::CountingPlan::mean_pairs_per_step)
        .def_readwrite("seed", &photocount::CountingPlan::seed)
        .def_readwrite("schedule", &photocount::CountingPlan::schedule)
        .def_readwrite("mean_background_per_step", &photocount::CountingPlan::mean_background_per_step);

    py::class_<photocount::CountRecord>(m, "CountRecord")
        .def_readonly("positions_mm", &photocount::CountRecord::positions_mm)
        .def_readonly("counts", &photocount::CountRecord::counts)
        .def_readonly("expected_counts", &photocount::CountRecord::expected_counts)
        .def("to_scan_record", &photocount::CountRecord::to_scan_record)
        .def("__len__", &photocount::CountRecord::size);

    m.def("run_counting_scan", &photocount::run_counting_scan, py::arg("config"), py::arg("plan"),
          py::arg("n_workers") = 1);

    py::enum_<analysis::FitModel>(m, "FitModel")
        .value("PRODUCT_COS2", analysis::FitModel::ProductCos2)
        .value("ENVELOPE_COS2", analysis::FitModel::EnvelopeCos2);

    py::class_<analysis::FitResult>(m, "FitResult")
        .def_readonly("model", &analysis::FitResult::model)
        .def_readonly("amplitude", &analysis::FitResult::amplitude)
        .def_readonly("offset", &analysis::FitResult::offset)
        .def_readonly("period1", &analysis::FitResult::period1)
        .def_readonly("period2", &analysis::FitResult::period2)
        .def_readonly("phase1", &analysis::FitResult::phase1)
        .def_readonly("phase2", &analysis::FitResult::phase2)
        .def_readonly("residual_norm", &analysis::FitResult::residual_norm)
        .def_readonly("converged", &analysis::FitResult::converged)
        .def_readonly("identifiable", &analysis::FitResult::identifiable)
        .def_readonly("iterations", &analysis::FitResult::iterations);

    py::class_<analysis::FitInit>(m, "FitInit")
        .def(py::init<>())
        .def_readwrite("amplitude", &analysis::FitInit::amplitude)
        .def_readwrite("offset", &analysis::FitInit::offset)
        .def_readwrite("period1", &analysis::FitInit::period1)
        .def_readwrite("period2", &analysis::FitInit::period2)
        .def_readwrite("phase1", &analysis::FitInit::phase1)
        .def_readwrite("phase2", &analysis::FitInit::phase2);

    py::class_<analysis::FitOptions>(m, "FitOptions")
        .def(py::init<>())
        .def_readwrite("max_iterations", &analysis::FitOptions::max_iterations)
        .def_readwrite("step_tolerance", &analysis::FitOptions::step_tolerance)
        .def_readwrite("period_min_mm", &analysis::FitOptions::period_min_mm)
        .def_readwrite("period_max_mm", &analysis::FitOptions::period_max_mm)
        .def_readwrite("fast_period_hint_mm", &analysis::FitOptions::fast_period_hint_mm);

    m.def("fit_product_cos2", &analysis::fit_product_cos2, py::arg("data"),
          py::arg("init") = analysis::FitInit{}, py::arg("options") = analysis::FitOptions{});
    m.def("fit_envelope_cos2", &analysis::fit_envelope_cos2, py::arg("data"),
          py::arg("init") = analysis::FitInit{}, py::arg("options") = analysis::FitOptions{});

    m.def("expected_beat_period", &analysis::expected_beat_period, py::arg("p1_mm"), py::arg("p2_mm"));

    py::class_<analysis::BeatEstimate>(m, "BeatEstimate")
        .def_readonly("detected", &analysis::BeatEstimate::detected)
        .def_readonly("period_mm", &analysis::BeatEstimate::period_mm)
        .def_readonly("period_low_mm", &analysis::BeatEstimate::period_low_mm)
        .def_readonly("period_high_mm", &analysis::BeatEstimate::period_high_mm)
        .def_readonly("frequency_per_mm", &analysis::BeatEstimate::frequency_per_mm);
    m.def("beat_from_spectrum", &analysis::beat_from_spectrum, py::arg("data"));

    py::class_<classical::PatternImage>(m, "PatternImage")
        .def_readonly("width", &classical::PatternImage::width)
        .def_readonly("height", &classical::PatternImage::height)
        .def_readonly("pitch_mm", &classical::PatternImage::pitch_mm)
        .def_property_readonly("pixels", &image_array);

    py::class_<classical::ScanLine>(m, "ScanLine")
        .def(py::init<>())
        .def_readwrite("start_x_mm", &classical::ScanLine::start_x_mm)
        .def_readwrite("start_y_mm", &classical::ScanLine::start_y_mm)
        .def_readwrite("dir_x", &classical::ScanLine::dir_x)
        .def_readwrite("dir_y", &classical::ScanLine::dir_y)
        .def_readwrite("length_mm", &classical::ScanLine::length_mm)
        .def_readwrite("n_samples", &classical::ScanLine::n_samples);

    m.def("render_superposition", &classical::render_superposition, py::arg("g1"), py::arg("g2"),
          py::arg("relative_angle_rad"), py::arg("width"), py::arg("height"), py::arg("pitch_mm"));
    m.def("extract_scanline", &classical::extract_scanline, py::arg("image"), py::arg("line"));
    m.def("aperture_convolved_product", &classical::aperture_convolved_product, py::arg("g1_effective"),
          py::arg("g2"), py::arg("pinhole_signal"), py::arg("pinhole_idler"),
          py::arg("coincidence_halfwidth_mm"), py::arg("node_pitch_mm"), py::arg("displacements"),
          py::arg("step_ratio"), py::arg("oversample") = 1);

    py::class_<harness::RunSetup>(m, "RunSetup")
        .def_readwrite("name", &harness::RunSetup::name)
        .def_readwrite("config", &harness::RunSetup::config)
        .def_readwrite("schedule", &harness::RunSetup::schedule)
        .def_readwrite("plan", &harness::RunSetup::plan)
        .def_readonly("classical_pattern", &harness::RunSetup::classical_pattern)
        .def_readonly("default_fit", &harness::RunSetup::default_fit);

    m.def("make_preset", &preset_by_name, py::arg("name"));
    m.def("load_config", &harness::load_config, py::arg("path"));

    py::class_<harness::OutputBundle>(m, "OutputBundle")
        .def_readonly("data_paths", &harness::OutputBundle::data_paths)
        .def_readonly("image_paths", &harness::OutputBundle::image_paths)
        .def_readonly("report_path", &harness::OutputBundle::report_path)
        .def_readonly("format_version", &harness::OutputBundle::format_version);

    m.def(
        "run_preset",
        [](const harness::RunSetup& setup, const std::string& mode, const std::string& out_dir,
           int workers) {
            harness::RunOptions options;
            options.mode = mode == "mc" ? harness::RunMode::MonteCarlo : harness::RunMode::Analytic;
            options.output_dir = out_dir;
            options.n_workers = workers;
            return harness::run_preset(setup, options);
        },
        py::arg("setup"), py::arg("mode") = "analytic", py::arg("out_dir") = ".",
        py::arg("workers") = 1);

    m.def("write_csv", py::overload_cast<const ScanRecord&, const std::string&>(&harness::write_csv),
          py::arg("record"), py::arg("path"));
    m.def("write_csv",
          py::overload_cast<const photocount::CountRecord&, const std::string&>(&harness::write_csv),
          py::arg("record"), py::arg("path"));
    m.def("read_csv", &harness::read_csv, py::arg("path"));
    m.def("write_pgm", &harness::write_pgm, py::arg("image"), py::arg("path"));
    m.def("read_pgm", &harness::read_pgm, py::arg("path"), py::arg("pitch_mm"));

    m.def("ideal_image", &optics::ideal_image, py::arg("field"), py::arg("magnification"));
    m.def("fresnel_propagate", &optics::fresnel_propagate, py::arg("field"), py::arg("distance_mm"));
    m.def("thin_lens", &optics::thin_lens, py::arg("field"), py::arg("focal_length_mm"));

    py::class_<optics::FieldGrid>(m, "FieldGrid")
        .def(py::init<>())
        .def_readwrite("grid", &optics::FieldGrid::grid)
        .def_readwrite("amplitudes", &optics::FieldGrid::amplitudes)
        .def_readwrite("wavelength_nm", &optics::FieldGrid::wavelength_nm)
        .def("energy", &optics::FieldGrid::energy);

    m.def("klyshko_image_fresnel", &twin::klyshko_image_fresnel, py::arg("config"),
          py::arg("illum_waist_mm") = 3.0);
}
