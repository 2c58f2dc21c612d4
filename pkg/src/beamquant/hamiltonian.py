"""Self-adjoint Hamiltonians ``-Lap + V`` and ``-Lap_g`` with cos/sin propagators.

Both operators are assembled densely and diagonalized once; ``cos(Ht)`` and
``sin(Ht)`` are then applied through the eigenexpansion.  Sizes are capped at
``MAX_DENSE_SIZE`` unknowns.

Sign convention for the coupled data: ``u_t = H v`` and ``v_t = -H u``, so
``u(t) = cos(Ht) u0 + sin(Ht) v0`` and ``v(t) = cos(Ht) v0 - sin(Ht) u0``.
"""

import csv
import io
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .euler_bernoulli import EBProblem, evolve_eb
from .spectral import Grid, RealFieldPair, apply_laplacian, inverse

MAX_DENSE_SIZE = 4096


def _check_size(grid: Grid, max_size: int):
    if grid.size > max_size:
        raise ValueError(f"dense assembly needs n^d = {grid.size} <= {max_size}; use a coarser grid")


@dataclass(frozen=True)
class PotentialField:
    grid: Grid
    V: np.ndarray = field(repr=False)

    def __post_init__(self):
        V = np.array(self.V, dtype=float)
        if V.shape != self.grid.shape:
            raise ValueError("potential does not match grid shape")
        if not np.all(np.isfinite(V)):
            raise ValueError("potential must be finite")
        V.flags.writeable = False
        object.__setattr__(self, "V", V)


@dataclass(frozen=True)
class MetricField:
    """Inverse metric ``g^{ik}(x)`` stored with shape ``(d, d, *grid.shape)``."""

    grid: Grid
    g_inv: np.ndarray = field(repr=False)
    g_det: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        d = self.grid.dim
        g_inv = np.array(self.g_inv, dtype=float)
        if g_inv.shape != (d, d) + self.grid.shape:
            raise ValueError(f"g_inv must have shape {(d, d) + self.grid.shape}, got {g_inv.shape}")
        if not np.allclose(g_inv, np.swapaxes(g_inv, 0, 1), rtol=0, atol=1e-14):
            raise ValueError("g_inv must be symmetric")
        pointwise = np.moveaxis(g_inv, (0, 1), (-2, -1))
        lowest = np.linalg.eigvalsh(pointwise)[..., 0]
        if np.any(lowest <= 0):
            bad = tuple(int(i) for i in np.argwhere(lowest <= 0)[0])
            raise ValueError(f"metric is not positive definite at grid point {bad} "
                             f"(smallest eigenvalue {lowest[bad]:.3e})")
        det_from_inverse = 1.0 / np.linalg.det(pointwise)
        if self.g_det is None:
            g_det = det_from_inverse
        else:
            g_det = np.array(self.g_det, dtype=float)
            if np.max(np.abs(g_det - det_from_inverse) / np.abs(det_from_inverse)) > 1e-10:
                raise ValueError("g_det is inconsistent with g_inv")
        g_inv.flags.writeable = False
        g_det.flags.writeable = False
        object.__setattr__(self, "g_inv", g_inv)
        object.__setattr__(self, "g_det", g_det)

    @classmethod
    def flat(cls, grid: Grid):
        eye = np.eye(grid.dim).reshape((grid.dim, grid.dim) + (1,) * grid.dim)
        return cls(grid, np.broadcast_to(eye, (grid.dim, grid.dim) + grid.shape))

    @classmethod
    def conformal(cls, grid: Grid, phi: np.ndarray):
        """``g^{ik} = exp(phi) delta^{ik}``."""
        eye = np.eye(grid.dim).reshape((grid.dim, grid.dim) + (1,) * grid.dim)
        return cls(grid, eye * np.exp(np.asarray(phi, dtype=float)))


@dataclass(frozen=True)
class DiscreteHamiltonian:
    """Dense operator with weights ``w`` and eigenpairs orthonormal in ``<a, b>_w = sum w a b``.

    ``weighted`` is ``diag(w) @ matrix``, which is exactly symmetric by construction.
    """

    grid: Grid
    matrix: np.ndarray = field(repr=False)
    weighted: np.ndarray = field(repr=False)
    weight: np.ndarray = field(repr=False)
    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)

    @classmethod
    def from_weighted(cls, grid, weighted, weight):
        weighted = 0.5 * (weighted + weighted.T)
        vals, vecs = scipy.linalg.eigh(weighted, np.diag(weight))
        matrix = weighted / weight[:, None]
        for arr in (matrix, weighted, weight, vals, vecs):
            arr.flags.writeable = False
        return cls(grid, matrix, weighted, weight, vals, vecs)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def apply(self, values: np.ndarray) -> np.ndarray:
        return (self.matrix @ np.asarray(values).reshape(-1)).reshape(self.grid.shape)

    def self_adjointness_residual(self) -> float:
        """``max |W A - (W A)^T| / max |W A|`` recomputed from ``matrix`` and ``weight``."""
        wa = self.weight[:, None] * self.matrix
        return float(np.max(np.abs(wa - wa.T)) / np.max(np.abs(wa)))

    def orthonormality_residual(self) -> float:
        gram = self.eigenvectors.T @ (self.weight[:, None] * self.eigenvectors)
        return float(np.max(np.abs(gram - np.eye(self.size))))

    def expand(self, values: np.ndarray) -> np.ndarray:
        return self.eigenvectors.T @ (self.weight * np.asarray(values, dtype=float).reshape(-1))

    def synthesize(self, coeffs: np.ndarray) -> np.ndarray:
        return (self.eigenvectors @ coeffs).reshape(self.grid.shape)


def spectral_laplacian_matrix(grid: Grid, max_size: int = MAX_DENSE_SIZE) -> np.ndarray:
    """Dense circulant matrix of the spectral ``-Laplacian`` (symmetric to the last bit)."""
    _check_size(grid, max_size)
    kernel = np.fft.ifftn(grid.k_squared).real
    neg = tuple((-np.arange(grid.n)) % grid.n for _ in range(grid.dim))
    kernel = 0.5 * (kernel + kernel[np.ix_(*neg)])
    idx = np.indices(grid.shape).reshape(grid.dim, -1)
    flat = np.zeros((grid.size, grid.size), dtype=np.int64)
    for ax in range(grid.dim):
        diff = (idx[ax][:, None] - idx[ax][None, :]) % grid.n
        flat = flat * grid.n + diff
    return kernel.reshape(-1)[flat]


def build_H_potential(grid: Grid, V, max_size: int = MAX_DENSE_SIZE) -> DiscreteHamiltonian:
    """``H = -Lap + V`` with the spectral Laplacian; weights ``h^d``."""
    V = V.V if isinstance(V, PotentialField) else PotentialField(grid, V).V
    matrix = spectral_laplacian_matrix(grid, max_size) + np.diag(V.reshape(-1))
    weight = np.full(grid.size, grid.cell_volume)
    return DiscreteHamiltonian.from_weighted(grid, weight[:, None] * matrix, weight)


def _one_sided(grid: Grid, axis: int, direction: int) -> sp.csr_matrix:
    """Periodic one-sided difference along ``axis``; ``direction`` is +1 (forward) or -1."""
    n, h = grid.n, grid.spacing
    shift = sp.eye(n, k=direction, format="csr") + sp.eye(n, k=direction - n * direction, format="csr")
    d1 = (shift - sp.eye(n)) / h if direction > 0 else (sp.eye(n) - shift) / h
    ops = [sp.eye(n)] * grid.dim
    ops[axis] = d1
    out = ops[0]
    for op in ops[1:]:
        out = sp.kron(out, op)
    return sp.csr_matrix(out)


def build_H_curved(grid: Grid, metric: MetricField, max_size: int = MAX_DENSE_SIZE) -> DiscreteHamiltonian:
    """``-Lap_g = -(1/sqrt g) d_i (sqrt g g^{ik} d_k)`` in divergence form.

    The weighted matrix is the average over the ``2^d`` choices of one-sided
    differences of ``sum_ik D_i^T diag(sqrt(g) g^{ik} h^d) D_k``; it is
    symmetric positive semidefinite with constants in its kernel.
    """
    _check_size(grid, max_size)
    if metric.grid != grid:
        raise ValueError("metric grid does not match")
    sqrt_g = np.sqrt(metric.g_det).reshape(-1)
    coef = metric.g_inv.reshape(grid.dim, grid.dim, -1) * sqrt_g * grid.cell_volume
    weighted = sp.csr_matrix((grid.size, grid.size))
    choices = list(itertools.product((1, -1), repeat=grid.dim))
    for signs in choices:
        diffs = [_one_sided(grid, ax, s) for ax, s in enumerate(signs)]
        for i in range(grid.dim):
            for k in range(grid.dim):
                weighted = weighted + diffs[i].T @ sp.diags(coef[i, k]) @ diffs[k]
    weighted = weighted.toarray() / len(choices)
    return DiscreteHamiltonian.from_weighted(grid, weighted, sqrt_g * grid.cell_volume)


def propagate_cos_sin(H: DiscreteHamiltonian, u0, v0, t: float) -> RealFieldPair:
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    a, b = H.expand(u0), H.expand(v0)
    c, s = np.cos(H.eigenvalues * t), np.sin(H.eigenvalues * t)
    return RealFieldPair(H.grid, H.synthesize(c * a + s * b), H.synthesize(c * b - s * a))


def expanded_eb_residual(grid: Grid, V, u) -> float:
    """Relative sup-norm gap between ``H^2 u`` and the expanded fourth-order form.

    ``H^2 u = Lap^2 u - Lap(V u) - V Lap u + V^2 u`` for ``H = -Lap + V``.
    """
    V = np.asarray(V.V if isinstance(V, PotentialField) else V, dtype=float)
    u = np.asarray(u, dtype=float)
    lap = lambda f: apply_laplacian(grid, f)  # noqa: E731
    Hu = -lap(u) + V * u
    H2u = -lap(Hu) + V * Hu
    lap_u = lap(u)
    expanded = lap(lap_u) - lap(V * u) - V * lap_u + V * V * u
    scale = float(np.max(np.abs(H2u)))
    return float(np.max(np.abs(H2u - expanded))) / (scale if scale else 1.0)


def material_correspondence(mu: float, F: float, I: float) -> float:
    """Scale ``s = hbar / 2m = sqrt(F I / mu)`` linking the beam to the Schrodinger flow."""
    if not (mu > 0):
        raise ValueError(f"mass density mu must be positive, got {mu}")
    if not (F * I > 0):
        raise ValueError(f"stiffness product F*I must be positive, got {F * I}")
    return math.sqrt(F * I / mu)


def evolve_material_beam(problem: EBProblem, t: float, mu: float, F: float, I: float) -> np.ndarray:
    """Solve ``mu w_tt + F I Lap^2 w = 0`` by rescaling time to the unit-constant solver."""
    s = material_correspondence(mu, F, I)
    scaled = EBProblem(problem.grid, problem.w0, problem.wdot0 / s)
    return evolve_eb(scaled, s * t)


def eigenvalue_csv(H: DiscreteHamiltonian) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "lambda"])
    for i, lam in enumerate(H.eigenvalues):
        writer.writerow([i, repr(float(lam))])
    return buf.getvalue()


def smooth_random_potential(grid: Grid, rng: np.random.Generator, amplitude: float = 1.0,
                            max_mode: int = 4) -> np.ndarray:
    """Real potential built from random Fourier modes with ``|m_j| <= max_mode``."""
    m = np.abs(grid.mode_indices())
    mask = np.ones(grid.shape, dtype=bool)
    for ax in range(grid.dim):
        shape = [1] * grid.dim
        shape[ax] = grid.n
        mask &= (m <= max_mode).reshape(shape)
    c = (rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)) * mask
    V = inverse(c).real
    return amplitude * V / np.max(np.abs(V))
