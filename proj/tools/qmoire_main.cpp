#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qmoire/errors.hpp"
#include "qmoire/runner.hpp"
#include "qmoire/spectrum.hpp"

namespace {

using namespace qmoire;

harness::RunSetup resolve_target(const std::string& target) {
    if (auto preset = harness::preset_from_string(target)) return harness::make_preset(*preset);
    if (!std::filesystem::exists(target))
        throw ConfigError("no such preset or config file: " + target);
    return harness::load_config(target);
}

void print_warnings(const harness::RunSetup& setup) {
    for (const auto& w : setup.config.validate()) std::cerr << "warning: " << w << "\n";
}

int cmd_run(const std::string& target, const std::string& mode, const std::string& out_dir,
            int workers, std::uint64_t seed, bool seed_set) {
    harness::RunSetup setup = resolve_target(target);
    print_warnings(setup);
    if (seed_set) setup.plan.seed = seed;

    harness::RunOptions options;
    options.mode = mode == "mc" ? harness::RunMode::MonteCarlo : harness::RunMode::Analytic;
    options.output_dir = out_dir;
    options.n_workers = workers;
    harness::OutputBundle bundle = harness::run_preset(setup, options);

    for (const auto& p : bundle.data_paths) std::cout << "data:   " << p << "\n";
    for (const auto& p : bundle.image_paths) std::cout << "image:  " << p << "\n";
    std::cout << "report: " << bundle.report_path << "\n";
    return 0;
}

int cmd_fit(const std::string& csv, const std::string& model, double hint) {
    ScanRecord rec = harness::read_csv(csv);
    analysis::FitOptions options;
    if (hint > 0.0) options.fast_period_hint_mm = hint;
    analysis::FitResult fit = model == "product" ? analysis::fit_product_cos2(rec, {}, options)
                                                 : analysis::fit_envelope_cos2(rec, {}, options);
    std::printf("model:         %s\n", model.c_str());
    std::printf("amplitude:     %.12g\n", fit.amplitude);
    std::printf("offset:        %.12g\n", fit.offset);
    if (model == "product") {
        std::printf("period1_mm:    %.12g\n", fit.period1);
        std::printf("period2_mm:    %.12g\n", fit.period2);
        std::printf("phase1_mm:     %.12g\n", fit.phase1);
        std::printf("phase2_mm:     %.12g\n", fit.phase2);
        double beat = analysis::expected_beat_period(fit.period1, fit.period2);
        if (std::isfinite(beat)) std::printf("beat_mm:       %.12g\n", beat);
        else std::printf("beat_mm:       infinite\n");
    } else {
        std::printf("period_mm:     %.12g\n", fit.period1);
        std::printf("phase_mm:      %.12g\n", fit.phase1);
    }
    std::printf("residual_norm: %.12g\n", fit.residual_norm);
    std::printf("converged:     %s\n", fit.converged ? "true" : "false");
    std::printf("identifiable:  %s\n", fit.identifiable ? "true" : "false");
    std::printf("iterations:    %d\n", fit.iterations);
    return 0;
}

int cmd_render(const std::string& target, const std::string& out_file, double angle_rad) {
    harness::RunSetup setup = resolve_target(target);
    const std::size_t width = 2048, height = 512;
    const double pitch = 0.02;
    auto image = classical::render_superposition(setup.config.grating_1, setup.config.grating_2,
                                                 angle_rad, width, height, pitch);
    harness::write_pgm(image, out_file);
    std::cout << "image:  " << out_file << "\n";
    return 0;
}

int cmd_beat(double p1, double p2) {
    double beat = analysis::expected_beat_period(p1, p2);
    if (std::isfinite(beat)) std::printf("beat_period_mm: %.12g\n", beat);
    else std::printf("beat_period_mm: infinite\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"twin-photon moire scan simulator and fringe analyzer"};
    app.require_subcommand(1);

    std::string target, out_dir = ".", mode = "analytic", csv, model, out_file = "pattern.pgm";
    int workers = 1;
    std::uint64_t seed = 0;
    double hint = 0.0, angle = 0.0, p1 = 0.0, p2 = 0.0;

    auto* run = app.add_subcommand("run", "simulate a preset or config file and fit the result");
    run->add_option("target", target, "preset name (fig3a, fig3b, fig5a, fig5b, fig1a, fig1b) or config path")
        ->required();
    run->add_option("--mode", mode, "analytic or mc")->check(CLI::IsMember({"analytic", "mc"}));
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--workers", workers, "worker threads for mc mode")->check(CLI::PositiveNumber);
    auto* seed_opt = run->add_option("--seed", seed, "override the Monte Carlo seed");

    auto* fit = app.add_subcommand("fit", "fit a scan CSV");
    fit->add_option("csv", csv, "scan CSV file")->required();
    fit->add_option("--model", model, "product or envelope")
        ->required()
        ->check(CLI::IsMember({"product", "envelope"}));
    fit->add_option("--fast-period", hint, "envelope: decimation window (one fast period, mm)");

    auto* render = app.add_subcommand("render", "render the grating superposition as a PGM image");
    render->add_option("target", target, "preset name or config path")->required();
    render->add_option("--out", out_file, "output PGM path");
    render->add_option("--angle", angle, "relative grating angle in radians");

    auto* beat = app.add_subcommand("beat", "expected moire beat period of two grating periods");
    beat->add_option("p1", p1, "first period (mm)")->required();
    beat->add_option("p2", p2, "second period (mm)")->required();

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(target, mode, out_dir, workers, seed, !seed_opt->empty());
        if (fit->parsed()) return cmd_fit(csv, model, hint);
        if (render->parsed()) return cmd_render(target, out_file, angle);
        if (beat->parsed()) return cmd_beat(p1, p2);
        return 1;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const qmoire::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
