"""Smoke tests for the python bindings."""

import math

import pytest

qm = pytest.importorskip("qmoire")


def test_beat_period():
    assert qm.expected_beat_period(1.2, 1.6) == pytest.approx(4.8, abs=1e-12)
    assert qm.expected_beat_period(0.8, 0.9) == pytest.approx(7.2, abs=1e-12)
    assert math.isinf(qm.expected_beat_period(1.3, 1.3))
    with pytest.raises(ValueError):
        qm.expected_beat_period(-1.0, 1.0)


def test_mask_evaluation():
    g = qm.make_grating(0.8, 0.0, qm.MaskProfile.COSINE_SQUARED)
    assert g(0.0) == pytest.approx(1.0)
    assert g(0.2) == pytest.approx(0.5)
    assert g.scaled(2.0).period_mm == pytest.approx(1.6)
    assert g.shifted(0.3)(0.3) == pytest.approx(1.0)
    assert qm.open_mask()(123.4) == 1.0


def test_preset_scan_and_fit():
    setup = qm.make_preset("fig3a")
    rec = qm.run_scan(setup.config, setup.schedule)
    assert len(rec) == 121
    assert max(rec.values) <= 1.0 and min(rec.values) >= 0.0

    fit = qm.fit_product_cos2(rec)
    assert fit.converged
    lo, hi = sorted([fit.period1, fit.period2])
    assert abs(lo - 1.2) / 1.2 < 1e-3
    assert abs(hi - 1.6) / 1.6 < 1e-3

    beat = qm.beat_from_spectrum(rec)
    assert beat.detected
    assert abs(beat.period_mm - 4.8) / 4.8 < 0.05


def test_counting_scan_determinism():
    setup = qm.make_preset("fig3b")
    setup.plan.mean_pairs_per_step = 200.0
    setup.plan.seed = 7
    a = qm.run_counting_scan(setup.config, setup.plan, 1)
    b = qm.run_counting_scan(setup.config, setup.plan, 4)
    assert list(a.counts) == list(b.counts)
    mean_ratio = sum(a.counts) / sum(a.expected_counts)
    assert 0.9 < mean_ratio < 1.1


def test_coincidence_rate_normalization():
    cfg = qm.ExperimentConfig()
    cfg.grating_1 = qm.open_mask()
    cfg.grating_2 = qm.open_mask()
    assert qm.coincidence_rate(cfg, 0.0, 0.0) == pytest.approx(1.0)


def test_render_image():
    g1 = qm.make_grating(1.2, 0.0, qm.MaskProfile.COSINE_SQUARED)
    g2 = qm.make_grating(1.6, 0.0, qm.MaskProfile.COSINE_SQUARED)
    img = qm.render_superposition(g1, g2, 0.0, 256, 64, 0.05)
    pixels = img.pixels
    assert pixels.shape == (64, 256)
    assert pixels.min() >= 0.0 and pixels.max() <= 1.0


def test_run_preset_files(tmp_path):
    setup = qm.make_preset("fig3a")
    bundle = qm.run_preset(setup, "analytic", str(tmp_path))
    assert (tmp_path / "fig3a_scan.csv").exists()
    assert (tmp_path / "fig3a_fit.json").exists()
    rec = qm.read_csv(bundle.data_paths[0])
    assert len(rec) == 121


def test_config_roundtrip(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "setup = pump_idler\n"
        "g1.period = 0.8\n"
        "g2.period = 1.2\n"
        "scan.steps = 32\n"
        "scan.step.g1 = 0.1\n"
        "scan.step.g2 = 0.2\n"
    )
    setup = qm.load_config(str(cfg))
    assert setup.config.grating_1.period_mm == 0.8

    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense = 1\n")
    with pytest.raises(ValueError):
        qm.load_config(str(bad))
