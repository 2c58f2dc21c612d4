"""Natural frequencies of finite beams and the matching quantum-box energies.

The beam ``[0, L]`` carries nodes ``x_j = j h`` with ``h = L / (n + 1)``;
``j = 1..n`` are interior.  Boundary conditions enter through ghost-point
elimination in the five-point stencil of ``d^4/dx^4``:

* simply supported ``w = w'' = 0``: ``w_0 = 0``, ``w_{-1} = -w_1``
* clamped ``w = w' = 0``: ``w_0 = 0``, ``w_{-1} = w_1``
* free ``w'' = w''' = 0``: ``w_0`` unknown, ``w_{-1} = 2 w_0 - w_1``,
  ``w_{-2} = 4 w_0 - 4 w_1 + w_2``

Free-end rows become symmetric after weighting the end node by 1/2
(trapezoid mass), so every case is solved as ``K w = omega^2 M w`` with
``K`` symmetric.
"""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

BOUNDARY_CONDITIONS = ("simply-supported", "clamped", "free")
_ALIASES = {"ss": "simply-supported", "pinned": "simply-supported", "simply_supported": "simply-supported"}
DEFAULT_RESOLUTION = 512
MATCH_TOL = 1e-2


def _bc(name: str) -> str:
    name = _ALIASES.get(name, name)
    if name not in BOUNDARY_CONDITIONS:
        raise ValueError(f"unknown boundary condition {name!r}; choose from {BOUNDARY_CONDITIONS}")
    return name


@dataclass(frozen=True)
class BeamSpec:
    length: float
    bc_left: str = "simply-supported"
    bc_right: str = "simply-supported"
    resolution: int = DEFAULT_RESOLUTION

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError(f"beam length must be positive, got {self.length}")
        if self.resolution < 16:
            raise ValueError(f"need at least 16 interior points, got {self.resolution}")
        object.__setattr__(self, "bc_left", _bc(self.bc_left))
        object.__setattr__(self, "bc_right", _bc(self.bc_right))

    @property
    def spacing(self) -> float:
        return self.length / (self.resolution + 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.resolution + 2) * self.spacing


@dataclass(frozen=True)
class ModeSet:
    frequencies: np.ndarray
    shapes: np.ndarray = field(repr=False)  # (n_modes, n + 2) on all nodes, boundaries included
    nodes: np.ndarray = field(repr=False)


def _ghost(j, bc):
    """Node ``j`` (possibly a ghost, ``j < 0``) of the left end as ``{node: coeff}``."""
    if j >= 0:
        if j == 0 and bc != "free":
            return {}
        return {j: 1.0}
    if bc == "simply-supported":
        return {} if j == -2 else {1: -1.0}
    if bc == "clamped":
        return {} if j == -2 else {1: 1.0}
    if j == -1:
        return {0: 2.0, 1: -1.0}
    return {0: 4.0, 1: -4.0, 2: 1.0}


def _node_expr(j, spec):
    last = spec.resolution + 1
    if j <= last // 2:
        return _ghost(j, spec.bc_left)
    mirrored = _ghost(last - j, spec.bc_right)
    return {last - node: c for node, c in mirrored.items()}


def biharmonic_system(spec: BeamSpec):
    """Return ``(K, M, unknown_nodes)`` for the discrete ``d^4/dx^4`` eigenproblem."""
    last = spec.resolution + 1
    unknown = [j for j in range(last + 1)
               if not ((j == 0 and spec.bc_left != "free") or (j == last and spec.bc_right != "free"))]
    col = {node: i for i, node in enumerate(unknown)}
    D = np.zeros((len(unknown), len(unknown)))
    stencil = (1.0, -4.0, 6.0, -4.0, 1.0)
    for row, j in enumerate(unknown):
        for offset, w in zip(range(-2, 3), stencil):
            for node, c in _node_expr(j + offset, spec).items():
                D[row, col[node]] += w * c
    D /= spec.spacing**4
    mass = np.ones(len(unknown))
    if spec.bc_left == "free":
        mass[0] = 0.5
    if spec.bc_right == "free":
        mass[-1] = 0.5
    K = mass[:, None] * D
    return K, mass, np.array(unknown)


def rigid_mode_count(spec: BeamSpec) -> int:
    """Zero-frequency modes: 2 minus the number of displacement/slope constraints, floored at 0."""
    held = {"simply-supported": 1, "clamped": 2, "free": 0}
    return max(0, 2 - held[spec.bc_left] - held[spec.bc_right])


def beam_frequencies(spec: BeamSpec, n_modes: int) -> ModeSet:
    """Lowest ``n_modes`` natural frequencies ``omega = sqrt(eig)`` and unit-norm mode shapes.

    Rigid-body modes of free ends (``omega = 0``) are skipped.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    if n_modes > spec.resolution // 4:
        raise ValueError(f"n_modes = {n_modes} exceeds the trust region n/4 = {spec.resolution // 4}")
    K, mass, unknown = biharmonic_system(spec)
    vals, vecs = scipy.linalg.eigh(0.5 * (K + K.T), np.diag(mass))
    skip = rigid_mode_count(spec)
    vals, vecs = vals[skip:skip + n_modes], vecs[:, skip:skip + n_modes]
    shapes = np.zeros((n_modes, spec.resolution + 2))
    shapes[:, unknown] = vecs.T
    weights = np.full(spec.resolution + 2, spec.spacing)
    weights[[0, -1]] *= 0.5
    norms = np.sqrt(shapes**2 @ weights)
    shapes /= norms[:, None]
    return ModeSet(np.sqrt(vals), shapes, spec.nodes)


def biharmonic_eigenvalues(spec: BeamSpec) -> np.ndarray:
    K, mass, _ = biharmonic_system(spec)
    return scipy.linalg.eigh(0.5 * (K + K.T), np.diag(mass), eigvals_only=True)


@dataclass(frozen=True)
class BoxEnergies:
    analytic: np.ndarray
    discrete: np.ndarray


def quantum_box_energies(L: float, n_modes: int, resolution: int = DEFAULT_RESOLUTION) -> BoxEnergies:
    """Dirichlet energies of ``-d^2/dx^2`` on ``(0, L)``: exact and three-point finite difference."""
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    if not L > 0:
        raise ValueError(f"box length must be positive, got {L}")
    analytic = (np.arange(1, n_modes + 1) * math.pi / L) ** 2
    h = L / (resolution + 1)
    diag = np.full(resolution, 2.0 / h**2)
    off = np.full(resolution - 1, -1.0 / h**2)
    discrete = scipy.linalg.eigh_tridiagonal(diag, off, eigvals_only=True,
                                             select="i", select_range=(0, n_modes - 1))
    return BoxEnergies(analytic, discrete)


@dataclass
class MatchReport:
    rows: list
    tolerance: float = MATCH_TOL
    assert_pass: bool = True

    @property
    def max_mismatch(self) -> float:
        return max(r["mismatch"] for r in self.rows)

    @property
    def passed(self) -> bool:
        return self.max_mismatch <= self.tolerance

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "omega_n", "E_n", "relative_mismatch"])
        for r in self.rows:
            writer.writerow([r["n"], repr(r["omega"]), repr(r["energy"]), repr(r["mismatch"])])
        return buf.getvalue()


def frequency_energy_match(L: float, n_modes: int, resolution: int = DEFAULT_RESOLUTION,
                           bc=("simply-supported", "simply-supported")) -> MatchReport:
    """Compare beam frequencies against Dirichlet-box energies ``(n pi / L)^2``.

    Only the simply-supported beam matches the box spectrum exactly; for other
    boundary conditions the mismatch is reported but ``assert_pass`` is False.
    """
    spec = BeamSpec(L, bc[0], bc[1], resolution)
    omega = beam_frequencies(spec, n_modes).frequencies
    energy = quantum_box_energies(L, n_modes, resolution).analytic
    rows = [{"n": i + 1, "omega": float(w), "energy": float(e), "mismatch": float(abs(w - e) / e)}
            for i, (w, e) in enumerate(zip(omega, energy))]
    ss = spec.bc_left == spec.bc_right == "simply-supported"
    return MatchReport(rows, assert_pass=ss)

