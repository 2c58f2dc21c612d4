import time

import numpy as np
import pytest

from beamquant.spectral import Grid
from beamquant.two_slit import (
    SlitConfig, SlitConfigError, default_config, detection_csv, fringe_analysis, intensity_pgm,
    run_two_slit, symmetry_residual, transmitted_fraction,
)


@pytest.fixture(scope="module")
def default_run():
    cfg = default_config()
    start = time.perf_counter()
    result = run_two_slit(cfg)
    return cfg, result, time.perf_counter() - start


def test_schrodinger_and_plate_paths_agree(default_run):
    _, result, _ = default_run
    assert result.residual <= 1e-10
    assert np.max(np.abs(result.intensity_schrodinger - result.intensity_eb)) <= 1e-10


def test_fringes_visibility_and_spacing(default_run):
    cfg, result, _ = default_run
    f = fringe_analysis(result.intensity_schrodinger, cfg)
    assert f["n_peaks"] >= 3
    assert f["visibility"] >= 0.5
    assert abs(f["spacing_ratio"] - 1) <= 0.3


def test_symmetric_configuration_gives_symmetric_pattern(default_run):
    cfg, result, _ = default_run
    assert symmetry_residual(result.intensity_schrodinger, cfg) <= 1e-10


def test_runtime_budget(default_run):
    assert default_run[2] < 60.0


def test_projection_never_adds_norm(default_run):
    _, result, _ = default_run
    assert np.all(np.diff(result.norms) <= 1e-12 * result.norms[0])


def test_transmission_is_partial(default_run):
    cfg, result, _ = default_run
    frac = transmitted_fraction(cfg, result.psi.values)
    assert 0.01 < frac < 0.9


def test_closed_barrier_blocks_the_packet():
    cfg = default_config().with_slits([])
    result = run_two_slit(cfg)
    assert transmitted_fraction(cfg, result.psi.values) <= 1e-6


def test_single_slit_has_no_two_slit_fringes():
    cfg = default_config(slit_centers=(0.0,))
    result = run_two_slit(cfg)
    f = fringe_analysis(result.intensity_schrodinger, cfg)
    assert cfg.fraunhofer_spacing() is None
    assert f["n_peaks"] < 3
    assert f["spacing_ratio"] is None


def test_fraunhofer_estimate_uses_exit_face():
    cfg = default_config()
    assert cfg.exit_face == 8.0
    assert cfg.fraunhofer_spacing() == pytest.approx(2 * np.pi * 32 / (16 * cfg.k_mean))


@pytest.mark.parametrize("overrides,fragment", [
    ({"slit_width": 0.5}, "grid spacing"),
    ({"slit_centers": (-3.0, 3.0), "slit_width": 6.0}, "overlap"),
    ({"slit_centers": (0.0, 127.0)}, "barrier edge"),
    ({"detect_x": 5.0}, "beyond the barrier"),
    ({"detect_x": 70.0}, "4x"),
    ({"source_center": (-20.0, 0.0)}, "overlaps the barrier"),
    ({"dt": 1.0}, "stability guard"),
])
def test_config_errors(overrides, fragment):
    with pytest.raises(SlitConfigError, match=fragment):
        default_config(**overrides)


def test_needs_two_dimensions():
    with pytest.raises(SlitConfigError):
        SlitConfig(Grid(1, 64, 64.0))


def test_fringe_analysis_rejects_bad_intensity():
    cfg = default_config()
    with pytest.raises(ValueError):
        fringe_analysis(np.zeros(256), cfg)
    with pytest.raises(ValueError):
        fringe_analysis(-np.ones(256), cfg)


def test_outputs(default_run):
    cfg, result, _ = default_run
    lines = detection_csv(result).splitlines()
    assert lines[0] == "y,I_schrodinger,I_eb"
    assert len(lines) == 257
    pgm = intensity_pgm(result.psi.values, cfg.grid)
    assert pgm.startswith(b"P5\n256 256\n255\n")
    assert len(pgm) == len(b"P5\n256 256\n255\n") + 256 * 256
