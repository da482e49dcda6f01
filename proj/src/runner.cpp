#include "qmoire/runner.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "qmoire/spectrum.hpp"

namespace qmoire::harness {

namespace {

using nlohmann::json;

json fit_to_json(const analysis::FitResult& fit) {
    json j;
    j["model"] = fit.model == analysis::FitModel::ProductCos2 ? "product_cos2" : "envelope_cos2";
    j["amplitude"] = fit.amplitude;
    j["offset"] = fit.offset;
    j["period1_mm"] = fit.period1;
    if (fit.model == analysis::FitModel::ProductCos2) {
        j["period2_mm"] = fit.period2;
        j["phase2_mm"] = fit.phase2;
        double beat = analysis::expected_beat_period(fit.period1, fit.period2);
        j["beat_period_from_fit_mm"] = std::isfinite(beat) ? json(beat) : json("infinite");
    }
    j["phase1_mm"] = fit.phase1;
    j["residual_norm"] = fit.residual_norm;
    j["converged"] = fit.converged;
    j["identifiable"] = fit.identifiable;
    j["iterations"] = fit.iterations;
    return j;
}

json beat_to_json(const analysis::BeatEstimate& beat) {
    json j;
    j["detected"] = beat.detected;
    if (beat.detected) {
        j["period_mm"] = beat.period_mm;
        j["period_low_mm"] = beat.period_low_mm;
        j["period_high_mm"] = std::isfinite(beat.period_high_mm) ? json(beat.period_high_mm)
                                                                 : json("infinite");
        j["frequency_per_mm"] = beat.frequency_per_mm;
    }
    return j;
}

void write_report(const json& j, const std::string& path) {
    namespace fs = std::filesystem;
    fs::path tmp = fs::path(path);
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << j.dump(2) << '\n';
    }
    fs::rename(tmp, path);
}

analysis::BeatEstimate try_beat(const ScanRecord& rec) {
    try {
        return analysis::beat_from_spectrum(rec);
    } catch (const std::invalid_argument&) {
        return {};
    }
}

OutputBundle run_pattern(const RunSetup& setup, const RunOptions& options) {
    namespace fs = std::filesystem;
    const fs::path dir(options.output_dir);

    // 40.96 mm square field at 0.02 mm/pixel
    const std::size_t width = 2048, height = 512;
    const double pitch = 0.02;
    auto image = classical::render_superposition(setup.config.grating_1, setup.config.grating_2,
                                                 0.0, width, height, pitch);

    classical::ScanLine line;
    line.start_x_mm = image.x_of(0.0);
    line.start_y_mm = 0.0;
    line.dir_x = 1.0;
    line.dir_y = 0.0;
    line.length_mm = (static_cast<double>(width) - 1.0) * pitch;
    line.n_samples = static_cast<int>(width);
    ScanRecord scanline = classical::extract_scanline(image, line);

    OutputBundle bundle;
    std::string image_path = (dir / (setup.name + ".pgm")).string();
    std::string csv_path = (dir / (setup.name + "_scanline.csv")).string();
    std::string report_path = (dir / (setup.name + "_fit.json")).string();
    write_pgm(image, image_path);
    write_csv(scanline, csv_path);

    analysis::BeatEstimate beat = try_beat(scanline);
    analysis::FitResult fit = analysis::fit_envelope_cos2(scanline);

    json report;
    report["format_version"] = 1;
    report["preset"] = setup.name;
    report["kind"] = "classical_pattern";
    report["gratings_mm"] = {setup.config.grating_1.period_mm, setup.config.grating_2.period_mm};
    report["fit"] = fit_to_json(fit);
    report["beat"] = beat_to_json(beat);
    write_report(report, report_path);

    bundle.image_paths.push_back(image_path);
    bundle.data_paths.push_back(csv_path);
    bundle.report_path = report_path;
    return bundle;
}

}  // namespace

OutputBundle run_preset(const RunSetup& setup, const RunOptions& options) {
    namespace fs = std::filesystem;
    fs::create_directories(options.output_dir);
    if (setup.classical_pattern) return run_pattern(setup, options);

    const fs::path dir(options.output_dir);
    OutputBundle bundle;
    std::string csv_path = (dir / (setup.name + "_scan.csv")).string();
    std::string report_path = (dir / (setup.name + "_fit.json")).string();

    ScanRecord rec;
    if (options.mode == RunMode::Analytic) {
        rec = twin::run_scan(setup.config, setup.schedule);
        write_csv(rec, csv_path);
    } else {
        auto counts = photocount::run_counting_scan(setup.config, setup.plan, options.n_workers);
        write_csv(counts, csv_path);
        rec = counts.to_scan_record();
    }

    analysis::FitResult fit = setup.default_fit == analysis::FitModel::ProductCos2
                                  ? analysis::fit_product_cos2(rec)
                                  : analysis::fit_envelope_cos2(rec);
    analysis::BeatEstimate beat = try_beat(rec);

    json report;
    report["format_version"] = 1;
    report["preset"] = setup.name;
    report["kind"] = "scan";
    report["mode"] = options.mode == RunMode::Analytic ? "analytic" : "montecarlo";
    if (options.mode == RunMode::MonteCarlo) {
        report["mc"] = {{"mean_pairs_per_step", setup.plan.mean_pairs_per_step},
                        {"seed", setup.plan.seed}};
    }
    report["fit"] = fit_to_json(fit);
    report["beat"] = beat_to_json(beat);
    write_report(report, report_path);

    bundle.data_paths.push_back(csv_path);
    bundle.report_path = report_path;
    return bundle;
}

}  // namespace qmoire::harness
