"""Spectral Euler-Bernoulli solver ``w_tt + Laplacian^2 w = 0`` and the Schrodinger equivalence check."""

import json
from dataclasses import dataclass, field

import numpy as np

from .schrodinger import SchrodingerProblem, evolve_free
from .spectral import ComplexField, Grid, apply_laplacian, forward, inverse

EQUIVALENCE_TOL = 1e-11


@dataclass(frozen=True)
class EBProblem:
    grid: Grid
    w0: np.ndarray = field(repr=False)
    wdot0: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("w0", "wdot0"):
            arr = np.asarray(getattr(self, name))
            if np.iscomplexobj(arr):
                if np.any(arr.imag != 0):
                    raise ValueError(f"{name} must be real")
                arr = arr.real
            arr = np.array(arr, dtype=float)
            if arr.shape != self.grid.shape:
                raise ValueError(f"{name} shape {arr.shape} does not match grid {self.grid.shape}")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be finite")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def eb_data_from_psi(psi0: ComplexField) -> tuple[EBProblem, EBProblem]:
    """Split ``psi0 = u0 + i v0`` into the two coupled beam problems.

    The ``u`` beam starts with velocity ``-Laplacian v0`` and the ``v`` beam
    with velocity ``+Laplacian u0``.
    """
    grid = psi0.grid
    u0, v0 = psi0.values.real.copy(), psi0.values.imag.copy()
    return (EBProblem(grid, u0, -apply_laplacian(grid, v0)),
            EBProblem(grid, v0, apply_laplacian(grid, u0)))


def eb_mode_solution(w0_hat, wdot0_hat, k2, t):
    """Per-mode displacement at time ``t``.

    For ``k != 0``: ``w0 cos(k^2 t) + (wdot0 / k^2) sin(k^2 t)``; the ``k = 0``
    mode has no restoring force and moves as ``w0 + wdot0 t``.
    """
    k2 = np.asarray(k2, dtype=float)
    zero = k2 == 0
    safe = np.where(zero, 1.0, k2)
    out = w0_hat * np.cos(k2 * t) + (wdot0_hat / safe) * np.sin(k2 * t)
    return np.where(zero, w0_hat + wdot0_hat * t, out)


def evolve_eb(problem: EBProblem, t: float) -> np.ndarray:
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    g = problem.grid
    w_hat = eb_mode_solution(forward(problem.w0), forward(problem.wdot0), g.k_squared, t)
    return inverse(w_hat).real


@dataclass
class EquivalenceReport:
    entries: list
    tolerance: float = EQUIVALENCE_TOL

    @property
    def passed(self) -> bool:
        return all(e["pass"] for e in self.entries)

    @property
    def max_residual(self) -> float:
        return max(e["residual"] for e in self.entries)

    def to_json(self) -> str:
        return json.dumps(self.entries, indent=2, sort_keys=True)


def verify_equivalence(psi0: ComplexField, times, tolerance: float = EQUIVALENCE_TOL,
                       tail_threshold=None) -> EquivalenceReport:
    """Propagate ``psi0`` by the Schrodinger solver and by the two beams; compare.

    The residual is ``||psi_S - (u + i v)||_inf / ||psi0||_inf``.
    """
    times = [float(t) for t in times]
    if not times:
        raise ValueError("verify_equivalence needs at least one time")
    problem = SchrodingerProblem(psi0, tail_threshold=tail_threshold)
    u_problem, v_problem = eb_data_from_psi(psi0)
    scale = psi0.sup()
    if scale == 0.0:
        scale = 1.0
    entries = []
    for t in times:
        psi_s = evolve_free(problem, t).values
        psi_eb = evolve_eb(u_problem, t) + 1j * evolve_eb(v_problem, t)
        residual = float(np.max(np.abs(psi_s - psi_eb))) / scale
        entries.append({"time": t, "residual": residual, "pass": bool(residual <= tolerance)})
    return EquivalenceReport(entries, tolerance)


def mode_energy(u_hat, v_hat):
    """``|u_k|^2 + |v_k|^2`` per mode; constant in time for coupled data."""
    return np.abs(u_hat) ** 2 + np.abs(v_hat) ** 2


def coupled_mode_residual(u0_hat, v0_hat, k2, t: float, step: float = 1e-6) -> float:
    """Max abs deviation of central differences from ``u_t = k^2 v``, ``v_t = -k^2 u``.

    Uses the closed-form rotation of the mode pair, so it applies equally to
    real wavenumbers and to p-adic multipliers ``|k|_p^alpha``.
    """
    def at(s):
        c, sn = np.cos(k2 * s), np.sin(k2 * s)
        return u0_hat * c + v0_hat * sn, v0_hat * c - u0_hat * sn

    up, vp = at(t + step)
    um, vm = at(t - step)
    u, v = at(t)
    du = (up - um) / (2 * step)
    dv = (vp - vm) / (2 * step)
    return max(float(np.max(np.abs(du - k2 * v))), float(np.max(np.abs(dv + k2 * u))))
