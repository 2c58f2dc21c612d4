import math

import numpy as np
import pytest
import scipy.optimize

from beamquant.eigenmodes import (
    BeamSpec, beam_frequencies, biharmonic_eigenvalues, biharmonic_system, frequency_energy_match,
    quantum_box_energies, rigid_mode_count,
)

from oracles import box_fd_eigenvalues, cantilever_betas, clamped_betas, ss_beam_fd_eigenvalues


def test_simply_supported_matches_box_energies():
    rep = frequency_energy_match(math.pi, 5, 512)
    assert rep.assert_pass
    for row in rep.rows:
        assert row["energy"] == pytest.approx(row["n"] ** 2)
        assert row["mismatch"] <= 1e-2
    assert rep.passed


def test_simply_supported_discrete_spectrum_is_exact_square_of_box():
    spec = BeamSpec(2.0, resolution=64)
    got = biharmonic_eigenvalues(spec)[:10]
    assert np.allclose(got, ss_beam_fd_eigenvalues(2.0, 64, 10), rtol=1e-10)


def test_box_discrete_energies_match_closed_form():
    box = quantum_box_energies(3.0, 6, 100)
    assert np.allclose(box.discrete, box_fd_eigenvalues(3.0, 100, 6), rtol=1e-12)
    assert np.allclose(box.analytic, (np.arange(1, 7) * math.pi / 3.0) ** 2)


@pytest.mark.parametrize("bc,betas,rigid", [
    (("clamped", "clamped"), clamped_betas(4), 0),
    (("clamped", "free"), cantilever_betas(4), 0),
    (("free", "free"), clamped_betas(4), 2),
])
def test_classical_beams_match_transcendental_roots(bc, betas, rigid):
    L = 1.0
    spec = BeamSpec(L, *bc, resolution=512)
    assert rigid_mode_count(spec) == rigid
    omega = beam_frequencies(spec, 4).frequencies
    assert np.allclose(omega, np.array(betas) ** 2 / L**2, rtol=2e-3)


def test_pinned_free_has_one_rigid_mode():
    spec = BeamSpec(1.0, "simply-supported", "free", 512)
    assert rigid_mode_count(spec) == 1
    beta = scipy.optimize.brentq(lambda b: math.tan(b) - math.tanh(b), 3.8, 4.0)
    assert beam_frequencies(spec, 1).frequencies[0] == pytest.approx(beta**2, rel=2e-3)


def test_rigid_modes_are_zero_and_stencil_is_psd():
    spec = BeamSpec(1.0, "free", "free", 64)
    lam = biharmonic_eigenvalues(spec) * spec.spacing**4
    assert lam.min() >= -1e-10
    assert np.all(np.abs(lam[:2]) < 1e-10)
    assert lam[2] > 1e-6


def test_stiffness_is_symmetric_for_every_pair():
    for left in ("simply-supported", "clamped", "free"):
        for right in ("simply-supported", "clamped", "free"):
            K, mass, _ = biharmonic_system(BeamSpec(1.0, left, right, 32))
            assert np.max(np.abs(K - K.T)) <= 1e-12 * np.max(np.abs(K))


def test_mode_shapes_are_sines_for_pinned_ends():
    modes = beam_frequencies(BeamSpec(math.pi, resolution=256), 3)
    x = modes.nodes
    for n, shape in enumerate(modes.shapes, start=1):
        ref = math.sqrt(2 / math.pi) * np.sin(n * x)
        sign = np.sign(shape @ ref)
        assert np.max(np.abs(sign * shape - ref)) < 1e-8


def test_mode_shapes_are_orthonormal():
    spec = BeamSpec(1.0, "clamped", "free", 128)
    modes = beam_frequencies(spec, 4)
    w = np.full(spec.resolution + 2, spec.spacing)
    w[[0, -1]] *= 0.5
    gram = modes.shapes @ (w[:, None] * modes.shapes.T)
    assert np.allclose(gram, np.eye(4), atol=1e-3)


def test_box_energies_converge_at_second_order():
    errs = [abs(quantum_box_energies(math.pi, 3, n).discrete - [1, 4, 9]).max() for n in (63, 127)]
    assert math.log2(errs[0] / errs[1]) == pytest.approx(2.0, abs=0.2)


def test_beam_frequencies_converge_at_second_order():
    betas = np.array(clamped_betas(3)) ** 2
    errs = []
    for n in (63, 127, 255):
        errs.append(np.max(np.abs(beam_frequencies(BeamSpec(1.0, "clamped", "clamped", n), 3).frequencies - betas)))
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert orders[-1] == pytest.approx(2.0, abs=0.2)


def test_non_pinned_match_is_reported_but_not_asserted():
    rep = frequency_energy_match(math.pi, 3, 128, ("clamped", "clamped"))
    assert not rep.assert_pass
    assert rep.max_mismatch > 0.5
    lines = rep.to_csv().splitlines()
    assert lines[0] == "n,omega_n,E_n,relative_mismatch"
    assert len(lines) == 4


def test_validation():
    with pytest.raises(ValueError):
        BeamSpec(1.0, "glued")
    with pytest.raises(ValueError):
        BeamSpec(-1.0)
    with pytest.raises(ValueError):
        BeamSpec(1.0, resolution=8)
    with pytest.raises(ValueError):
        beam_frequencies(BeamSpec(1.0, resolution=32), 9)
    assert BeamSpec(1.0, "ss", "pinned").bc_left == "simply-supported"
