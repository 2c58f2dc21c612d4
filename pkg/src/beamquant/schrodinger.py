"""Exact spectral propagation of ``i psi_t = -Laplacian psi`` (units hbar = 1, 2m = 1)."""

from dataclasses import dataclass

import numpy as np

from .spectral import ComplexField, Grid, apply_laplacian, forward, inverse, spectral_tail_fraction

DEFAULT_TAIL_THRESHOLD = 1e-6


class UnresolvedDataError(ValueError):
    """Initial data carries too much energy in the top octave of the grid."""


@dataclass(frozen=True)
class SchrodingerProblem:
    psi0: ComplexField
    tail_threshold: float | None = DEFAULT_TAIL_THRESHOLD

    def __post_init__(self):
        if self.tail_threshold is not None:
            tail = spectral_tail_fraction(self.psi0.values, self.grid)
            if tail >= self.tail_threshold:
                raise UnresolvedDataError(
                    f"top-octave energy fraction {tail:.3e} >= threshold {self.tail_threshold:.1e}; "
                    "refine the grid or smooth the initial data")

    @property
    def grid(self) -> Grid:
        return self.psi0.grid


def free_phase(grid: Grid, t: float) -> np.ndarray:
    return np.exp(-1j * grid.k_squared * t)


def evolve_free(problem: SchrodingerProblem, t: float) -> ComplexField:
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    grid = problem.grid
    return ComplexField(grid, inverse(forward(problem.psi0.values) * free_phase(grid, t)))


def initial_time_derivative(problem: SchrodingerProblem) -> ComplexField:
    """``psi_t(0) = i Laplacian psi0``."""
    return ComplexField(problem.grid, 1j * apply_laplacian(problem.grid, problem.psi0.values))
