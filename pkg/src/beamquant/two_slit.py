"""Two-slit scattering computed as a Schrodinger field and as a pair of plates.

Each step applies the exact free evolution over ``dt`` and then projects the
field to zero on the barrier set (a wall of finite thickness with openings).
The Schrodinger path propagates the complex ``psi``; the plate path propagates
``(u, v)`` by the per-mode rotation and projects both.  Because projection and
rotation are both real-linear, the two paths agree to roundoff.

Coordinates are the grid's signed coordinates, so reflection ``y -> -y`` is an
exact index map and symmetric configurations give symmetric patterns.
"""

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .spectral import ComplexField, Grid, forward, inverse
from .symplectic import rotate_modes

PEAK_THRESHOLD = 0.05


class SlitConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SlitConfig:
    grid: Grid
    barrier_x: float = 0.0
    barrier_thickness: float = 16.0
    slit_centers: tuple = (-8.0, 8.0)
    slit_width: float = 5.0
    source_center: tuple = (-48.0, 0.0)
    source_width: float = 8.0
    k_mean: float = 2 * math.pi / 6
    detect_x: float = 40.0
    total_time: float | None = None
    dt: float = 0.1

    def __post_init__(self):
        g = self.grid
        if g.dim != 2:
            raise SlitConfigError("the two-slit experiment needs a 2D grid")
        object.__setattr__(self, "slit_centers", tuple(float(c) for c in self.slit_centers))
        object.__setattr__(self, "source_center", tuple(float(c) for c in self.source_center))
        if self.total_time is None:
            flight = (self.detect_x - self.source_center[0]) / (2 * self.k_mean)
            object.__setattr__(self, "total_time", flight)
        half = g.length / 2
        if not self.slit_width >= g.spacing:
            raise SlitConfigError(f"slit width {self.slit_width} is below the grid spacing {g.spacing}")
        if not self.barrier_thickness >= g.spacing:
            raise SlitConfigError("barrier must be at least one grid cell thick")
        for c in self.slit_centers:
            if abs(c) + self.slit_width / 2 >= half:
                raise SlitConfigError(f"slit at y = {c} runs past the barrier edge at |y| = {half}")
        cs = sorted(self.slit_centers)
        for a, b in zip(cs, cs[1:]):
            if b - a <= self.slit_width:
                raise SlitConfigError(f"slits at {a} and {b} overlap (width {self.slit_width})")
        if self.detect_x <= self.exit_face:
            raise SlitConfigError("detection line must lie beyond the barrier")
        if 4 * (self.detect_x - self.barrier_x) > g.length:
            raise SlitConfigError("box must be at least 4x the barrier-to-detector distance")
        if self.source_center[0] + 5 * self.source_width > self.barrier_x - self.barrier_thickness / 2:
            raise SlitConfigError("source packet overlaps the barrier (need 5 widths of clearance)")
        if self.source_center[0] - 5 * self.source_width < -half:
            raise SlitConfigError("source packet does not fit inside the box")
        if not self.dt > 0 or not self.total_time > 0:
            raise SlitConfigError("dt and total_time must be positive")
        if 2 * abs(self.k_mean) * self.dt > g.spacing:
            raise SlitConfigError(
                f"stability guard: group velocity 2k x dt = {2 * abs(self.k_mean) * self.dt:.3g} "
                f"exceeds one grid cell {g.spacing:.3g}")

    @property
    def exit_face(self) -> float:
        return self.barrier_x + self.barrier_thickness / 2

    @property
    def steps(self) -> int:
        return max(1, int(round(self.total_time / self.dt)))

    def with_slits(self, centers):
        return dataclasses.replace(self, slit_centers=tuple(centers))

    def barrier_mask(self) -> np.ndarray:
        X, Y = self.grid.mesh(signed=True)
        wall = np.abs(X - self.barrier_x) <= self.barrier_thickness / 2
        opening = np.zeros_like(wall)
        for c in self.slit_centers:
            opening |= np.abs(Y - c) <= self.slit_width / 2
        return wall & ~opening

    def source(self) -> ComplexField:
        X, Y = self.grid.mesh(signed=True)
        x0, y0 = self.source_center
        r2 = (X - x0) ** 2 + (Y - y0) ** 2
        return ComplexField(self.grid, np.exp(-r2 / (2 * self.source_width**2) + 1j * self.k_mean * X))

    def detection_index(self) -> int:
        xs = self.grid.signed_coords()
        return int(np.argmin(np.abs(xs - self.detect_x)))

    def fraunhofer_spacing(self) -> float | None:
        """Far-field estimate ``2 pi D / (d k)`` with ``D`` measured from the exit face."""
        if len(self.slit_centers) < 2:
            return None
        cs = sorted(self.slit_centers)
        d = cs[1] - cs[0]
        return 2 * math.pi * (self.detect_x - self.exit_face) / (d * abs(self.k_mean))


def default_config(n: int = 256, **overrides) -> SlitConfig:
    """Default geometry in grid units (h = 1 at n = 256)."""
    grid = Grid(2, n, float(n))
    return SlitConfig(grid, **overrides)


@dataclass
class TwoSlitResult:
    y: np.ndarray = field(repr=False)
    intensity_schrodinger: np.ndarray = field(repr=False)
    intensity_eb: np.ndarray = field(repr=False)
    residual: float = 0.0
    psi: ComplexField = field(default=None, repr=False)
    psi_eb: np.ndarray = field(default=None, repr=False)
    norms: np.ndarray = field(default=None, repr=False)
    incident_norm: float = 1.0


def run_two_slit(config: SlitConfig, psi0: ComplexField | None = None) -> TwoSlitResult:
    grid = config.grid
    psi0 = config.source() if psi0 is None else psi0
    mask = config.barrier_mask()
    k2 = grid.k_squared
    phase = np.exp(-1j * k2 * config.dt)

    psi = psi0.values.copy()
    psi[mask] = 0
    u, v = psi.real.copy(), psi.imag.copy()
    norms = [np.linalg.norm(psi)]
    for _ in range(config.steps):
        psi = inverse(forward(psi) * phase)
        psi[mask] = 0
        norms.append(np.linalg.norm(psi))

        uh, vh = rotate_modes(forward(u), forward(v), k2, config.dt)
        u, v = inverse(uh).real, inverse(vh).real
        u[mask] = 0
        v[mask] = 0

    psi_eb = u + 1j * v
    incident = psi0.norm() ** 2
    row = config.detection_index()
    order = np.argsort(grid.signed_coords())
    intensity_s = np.abs(psi[row, order]) ** 2 / incident
    intensity_eb = np.abs(psi_eb[row, order]) ** 2 / incident
    return TwoSlitResult(
        y=grid.signed_coords()[order],
        intensity_schrodinger=intensity_s,
        intensity_eb=intensity_eb,
        residual=float(np.max(np.abs(psi - psi_eb))),
        psi=ComplexField(grid, psi),
        psi_eb=psi_eb,
        norms=np.array(norms),
        incident_norm=incident,
    )


def transmitted_fraction(config: SlitConfig, psi: np.ndarray) -> float:
    """Share of the incident norm found beyond the barrier's exit face (up to the box half)."""
    X, _ = config.grid.mesh(signed=True)
    beyond = X > config.exit_face
    incident = config.source().norm() ** 2
    return float(np.sum(np.abs(psi[beyond]) ** 2) * config.grid.cell_volume / incident)


def fringe_analysis(intensity, config: SlitConfig, y=None) -> dict:
    """Peaks above 5% of the maximum, mean spacing and central-fringe visibility.

    Visibility ``(I_max - I_min) / (I_max + I_min)`` is taken over the central
    region bounded by the peaks adjacent to the global maximum; with no
    neighbouring peak there is no fringe and the visibility is 0.
    """
    intensity = np.asarray(intensity, dtype=float)
    if np.any(intensity < 0):
        raise ValueError("intensity must be non-negative")
    if not np.any(intensity > 0):
        raise ValueError("intensity is identically zero")
    if y is None:
        y = np.sort(config.grid.signed_coords())
    peaks, _ = find_peaks(intensity, height=PEAK_THRESHOLD * intensity.max())
    positions = y[peaks]
    spacing = float(np.mean(np.diff(positions))) if len(peaks) > 1 else None
    visibility = 0.0
    if len(peaks):
        centre = int(np.argmax(intensity[peaks]))
        lo = peaks[centre - 1] if centre > 0 else peaks[centre]
        hi = peaks[centre + 1] if centre + 1 < len(peaks) else peaks[centre]
        if hi > lo:
            window = intensity[lo:hi + 1]
            visibility = float((window.max() - window.min()) / (window.max() + window.min()))
    estimate = config.fraunhofer_spacing()
    return {
        "peaks": [float(p) for p in positions],
        "n_peaks": int(len(peaks)),
        "mean_spacing": spacing,
        "visibility": visibility,
        "fraunhofer_spacing": estimate,
        "spacing_ratio": (spacing / estimate) if (spacing and estimate) else None,
    }


def symmetry_residual(intensity: np.ndarray, config: SlitConfig) -> float:
    """``max |I(y) - I(-y)| / max I`` for an intensity sampled in ascending-y order."""
    # ascending position j holds m = j - n/2, so m -> -m is j -> -j mod n
    reflected = (-np.arange(config.grid.n)) % config.grid.n
    return float(np.max(np.abs(intensity - intensity[reflected])) / np.max(intensity))


def detection_csv(result: TwoSlitResult) -> str:
    lines = ["y,I_schrodinger,I_eb"]
    for y, a, b in zip(result.y, result.intensity_schrodinger, result.intensity_eb):
        lines.append(f"{float(y)!r},{float(a)!r},{float(b)!r}")
    return "\n".join(lines) + "\n"


def intensity_pgm(psi: np.ndarray, grid: Grid) -> bytes:
    """8-bit binary PGM of ``|psi|^2`` scaled to its maximum; x runs left to right, y upward."""
    order = np.argsort(grid.signed_coords())
    image = (np.abs(psi) ** 2)[np.ix_(order, order)].T
    peak = image.max()
    scaled = np.zeros(image.shape, dtype=np.uint8) if peak == 0 else np.rint(255 * image / peak).astype(np.uint8)
    rows, cols = scaled.shape
    return f"P5\n{cols} {rows}\n255\n".encode("ascii") + scaled[::-1].tobytes()
