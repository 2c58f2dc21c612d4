"""Command-line entry point.

    beamquant <subcommand> [--config FILE] [--out DIR] [--seed N]
    beamquant --list-checks

Subcommands: verify-equivalence, symplectic, hamiltonian, eigenmodes,
two-slit, padic.  The config file is a JSON object whose keys are validated
against the subcommand's schema; unknown keys are an error.  ``BEAMQUANT_CONFIG``,
``BEAMQUANT_OUT`` and ``BEAMQUANT_SEED`` supply defaults for the flags.

Exit status: 0 when every check passes, 1 when a check fails, 2 for
configuration errors (with a JSON diagnostic on stdout).
"""

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from . import eigenmodes, fieldio, hamiltonian, padic, symplectic, two_slit
from .checks import format_checks
from .euler_bernoulli import verify_equivalence
from .schrodinger import SchrodingerProblem, evolve_free
from .spectral import ComplexField, Grid, gaussian_packet, random_resolved_field

ENV_PREFIX = "BEAMQUANT_"
SUBCOMMANDS = ("verify-equivalence", "symplectic", "hamiltonian", "eigenmodes", "two-slit", "padic")


class ConfigError(Exception):
    def __init__(self, details):
        super().__init__(str(details))
        self.details = details


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class EquivalenceConfig(_Strict):
    dim: int = Field(1, ge=1, le=2)
    n: int = Field(256, ge=4)
    length: float = Field(2 * math.pi, gt=0)
    times: list[float] = Field(default_factory=lambda: [0.1, 1.0, 10.0], min_length=1)
    initial: str = Field("gaussian", pattern="^(gaussian|random)$")
    width: float = Field(0.4, gt=0)
    wavenumber: float = 4.0
    tolerance: float = Field(1e-11, gt=0)


class SymplecticConfig(_Strict):
    n: int = Field(64, ge=4)
    length: float = Field(2 * math.pi, gt=0)
    dt_fraction: float = Field(0.3, gt=0)
    steps: int = Field(10000, ge=1)
    exact_time: float = 10.0
    exact_tolerance: float = 1e-12
    leapfrog_tolerance: float = 1e-4


class HamiltonianConfig(_Strict):
    n: int = Field(128, ge=4)
    length: float = Field(2 * math.pi, gt=0)
    potential_amplitude: float = 1.0
    potential_modes: int = Field(4, ge=0)
    bandwidth: float = Field(3.0, gt=0)
    time: float = 1.0
    fd_step: float = Field(1e-5, gt=0)
    metric: str = Field("conformal", pattern="^(none|flat|conformal)$")
    metric_n: int = Field(16, ge=4)
    metric_amplitude: float = 0.3


class EigenmodesConfig(_Strict):
    length: float = Field(math.pi, gt=0)
    n_modes: int = Field(5, ge=1)
    resolution: int = Field(512, ge=16)
    bc_left: str = "simply-supported"
    bc_right: str = "simply-supported"
    tolerance: float = 1e-2


class TwoSlitConfig(_Strict):
    n: int = Field(256, ge=16)
    barrier_x: float = 0.0
    barrier_thickness: float = 16.0
    slit_centers: list[float] = Field(default_factory=lambda: [-8.0, 8.0])
    slit_width: float = 5.0
    source_center: list[float] = Field(default_factory=lambda: [-48.0, 0.0], min_length=2, max_length=2)
    source_width: float = 8.0
    k_mean: float = 2 * math.pi / 6
    detect_x: float = 40.0
    total_time: float | None = None
    dt: float = 0.1


class PAdicConfig(_Strict):
    p: int = 2
    M: int = Field(3, ge=0)
    N: int = Field(3, ge=0)
    alpha: float = Field(1.0, gt=0)
    times: list[float] = Field(default_factory=lambda: [0.5, 1.0, 3.0], min_length=1)
    tolerance: float = 1e-12


SCHEMAS = {
    "verify-equivalence": EquivalenceConfig,
    "symplectic": SymplecticConfig,
    "hamiltonian": HamiltonianConfig,
    "eigenmodes": EigenmodesConfig,
    "two-slit": TwoSlitConfig,
    "padic": PAdicConfig,
}


def _check(name, value, tolerance, passed=None):
    value = float(value)
    if passed is None:
        passed = value <= tolerance
    return {"name": name, "value": value, "tolerance": tolerance, "pass": bool(passed)}


def _write(out: Path, name: str, data):
    path = out / name
    if isinstance(data, bytes):
        path.write_bytes(data)
    else:
        path.write_text(data)


def run_verify_equivalence(cfg: EquivalenceConfig, rng, out: Path) -> list:
    grid = Grid(cfg.dim, cfg.n, cfg.length)
    if cfg.initial == "gaussian":
        psi0 = gaussian_packet(grid, 0.0, cfg.width, cfg.wavenumber)
    else:
        psi0 = random_resolved_field(grid, rng)
    report = verify_equivalence(psi0, cfg.times, tolerance=cfg.tolerance)
    _write(out, "equivalence.json", report.to_json() + "\n")
    return [_check(f"residual(t={e['time']!r})", e["residual"], cfg.tolerance) for e in report.entries]


def run_symplectic(cfg: SymplecticConfig, rng, out: Path) -> list:
    grid = Grid(1, cfg.n, cfg.length)
    state = symplectic.SymplecticState(random_resolved_field(grid, rng).split())
    h0 = symplectic.hamiltonian_energy(state)
    exact_dev = max(abs(symplectic.hamiltonian_energy(symplectic.exact_rotation(state, t)) - h0) / h0
                    for t in np.linspace(0.0, cfg.exact_time, 21))
    dt = cfg.dt_fraction * symplectic.leapfrog_bound(grid)
    try:
        _, trace = symplectic.leapfrog_integrate(state, dt, cfg.steps, trace=True)
    except symplectic.StabilityError as exc:
        raise ConfigError([{"loc": ["dt_fraction"], "msg": str(exc)}]) from exc
    _write(out, "energy_trace.csv", symplectic.energy_trace_csv(trace))
    stats = symplectic.drift_statistics(trace)
    return [
        _check("exact_rotation_energy_deviation", exact_dev, cfg.exact_tolerance),
        _check("leapfrog_energy_oscillation", stats["max_relative_deviation"], cfg.leapfrog_tolerance),
        _check("leapfrog_slope_over_stderr", abs(stats["slope"]) / stats["slope_stderr"], 1.0),
    ]


def run_hamiltonian(cfg: HamiltonianConfig, rng, out: Path) -> list:
    grid = Grid(1, cfg.n, cfg.length)
    V = hamiltonian.smooth_random_potential(grid, rng, cfg.potential_amplitude, cfg.potential_modes)
    H = hamiltonian.build_H_potential(grid, V)
    _write(out, "eigenvalues.csv", hamiltonian.eigenvalue_csv(H))
    psi0 = random_resolved_field(grid, rng, bandwidth=cfg.bandwidth).values
    psi0 = psi0 / np.max(np.abs(psi0))
    u0, v0 = psi0.real, psi0.imag
    t, eps = cfg.time, cfg.fd_step

    def psi_at(s):
        pair = hamiltonian.propagate_cos_sin(H, u0, v0, s)
        return pair.psi

    dpsi = (psi_at(t + eps) - psi_at(t - eps)) / (2 * eps)
    schrodinger_residual = float(np.max(np.abs(1j * dpsi - H.apply(psi_at(t)))))

    H0 = hamiltonian.build_H_potential(grid, np.zeros(grid.shape))
    free = evolve_free(SchrodingerProblem(ComplexField(grid, psi0), tail_threshold=None), t).values
    reduction = float(np.max(np.abs(hamiltonian.propagate_cos_sin(H0, u0, v0, t).psi - free)))
    expanded = hamiltonian.expanded_eb_residual(grid, V, u0)
    checks = [
        _check("i_psi_t_minus_H_psi", schrodinger_residual, 1e-4),
        _check("free_reduction", reduction, 1e-10),
        _check("expanded_eb_residual", expanded, 1e-10),
        _check("self_adjointness", H.self_adjointness_residual(), 1e-12),
    ]
    if cfg.metric != "none":
        mgrid = Grid(2, cfg.metric_n, cfg.length)
        if cfg.metric == "flat":
            metric = hamiltonian.MetricField.flat(mgrid)
        else:
            X, Y = mgrid.mesh()
            metric = hamiltonian.MetricField.conformal(mgrid, cfg.metric_amplitude * np.sin(X) * np.cos(Y))
        Hg = hamiltonian.build_H_curved(mgrid, metric)
        _write(out, "curved_eigenvalues.csv", hamiltonian.eigenvalue_csv(Hg))
        checks.append(_check("curved_self_adjointness", Hg.self_adjointness_residual(), 1e-12))
        checks.append(_check("curved_constant_kernel", float(np.max(np.abs(Hg.apply(np.ones(mgrid.shape))))), 1e-12))
    return checks


def run_eigenmodes(cfg: EigenmodesConfig, rng, out: Path) -> list:
    try:
        report = eigenmodes.frequency_energy_match(cfg.length, cfg.n_modes, cfg.resolution,
                                                   (cfg.bc_left, cfg.bc_right))
    except ValueError as exc:
        raise ConfigError([{"loc": [], "msg": str(exc)}]) from exc
    _write(out, "eigenmodes.csv", report.to_csv())
    # only the pinned-pinned beam is expected to reproduce the box spectrum
    passed = report.max_mismatch <= cfg.tolerance if report.assert_pass else True
    return [_check("max_relative_mismatch", report.max_mismatch, cfg.tolerance, passed)]


def run_two_slit(cfg: TwoSlitConfig, rng, out: Path) -> list:
    params = cfg.model_dump()
    n = params.pop("n")
    try:
        config = two_slit.default_config(n, **params)
    except two_slit.SlitConfigError as exc:
        raise ConfigError([{"loc": [], "msg": str(exc)}]) from exc
    result = two_slit.run_two_slit(config)
    fringes = two_slit.fringe_analysis(result.intensity_schrodinger, config)
    _write(out, "detection.csv", two_slit.detection_csv(result))
    _write(out, "final_field.bin", fieldio.field_to_bytes(result.psi))
    _write(out, "intensity.pgm", two_slit.intensity_pgm(result.psi.values, config.grid))
    _write(out, "fringes.json", json.dumps(fringes, indent=2, sort_keys=True) + "\n")
    ratio = fringes["spacing_ratio"]
    return [
        _check("schrodinger_eb_residual", result.residual, 1e-10),
        _check("fringe_count", fringes["n_peaks"], 3, fringes["n_peaks"] >= 3),
        _check("visibility", fringes["visibility"], 0.5, fringes["visibility"] >= 0.5),
        _check("spacing_ratio_error", abs(ratio - 1) if ratio else math.inf, 0.3),
    ]


def run_padic(cfg: PAdicConfig, rng, out: Path) -> list:
    try:
        grid = padic.PAdicGrid(cfg.p, cfg.M, cfg.N)
    except ValueError as exc:
        raise ConfigError([{"loc": ["p"], "msg": str(exc)}]) from exc
    psi0 = padic.locally_constant_field(grid, rng, radius_exp=grid.N, support_exp=grid.M)
    u0, v0 = psi0.values.real, psi0.values.imag
    norm0 = np.linalg.norm(psi0.values)
    e0 = padic.padic_energy(u0, v0, cfg.alpha, grid)
    eq = norm_dev = energy_dev = 0.0
    for t in cfg.times:
        psi_t = padic.evolve_padic_schrodinger(psi0, cfg.alpha, t).values
        pair = padic.evolve_padic_eb(u0, v0, cfg.alpha, t, grid)
        eq = max(eq, float(np.max(np.abs(psi_t - pair.psi))) / float(np.max(np.abs(psi0.values))))
        norm_dev = max(norm_dev, abs(np.linalg.norm(psi_t) - norm0) / norm0)
        energy_dev = max(energy_dev, abs(padic.padic_energy(pair.u, pair.v, cfg.alpha, grid) - e0) / e0)
    _write(out, "padic_field.csv", padic.field_csv(padic.evolve_padic_schrodinger(psi0, cfg.alpha, cfg.times[-1])))
    ball = padic.padic_fourier(padic.PAdicField(grid, grid.unit_ball())).coeffs
    duality = float(np.max(np.abs(ball - grid.dual_unit_ball() * grid.p**grid.N / math.sqrt(grid.size))))
    return [
        _check("schrodinger_eb_residual", eq, cfg.tolerance),
        _check("norm_drift", norm_dev, cfg.tolerance),
        _check("energy_drift", energy_dev, cfg.tolerance),
        _check("unit_ball_self_duality", duality, cfg.tolerance),
    ]


RUNNERS = {
    "verify-equivalence": run_verify_equivalence,
    "symplectic": run_symplectic,
    "hamiltonian": run_hamiltonian,
    "eigenmodes": run_eigenmodes,
    "two-slit": run_two_slit,
    "padic": run_padic,
}


def load_config(subcommand: str, path):
    raw = {}
    if path:
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError([{"loc": ["--config"], "msg": str(exc)}]) from exc
        if not isinstance(raw, dict):
            raise ConfigError([{"loc": ["--config"], "msg": "config must be a JSON object"}])
    try:
        return SCHEMAS[subcommand].model_validate(raw)
    except ValidationError as exc:
        raise ConfigError([{"loc": list(e["loc"]), "msg": e["msg"], "type": e["type"]}
                           for e in exc.errors()]) from exc


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(_dump({"status": "config-error", "errors": [{"loc": ["argv"], "msg": message}]}))
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="beamquant", description="Schrodinger / Euler-Bernoulli equivalence experiments")
    parser.add_argument("subcommand", nargs="?", choices=SUBCOMMANDS)
    parser.add_argument("--config", default=os.environ.get(ENV_PREFIX + "CONFIG"))
    parser.add_argument("--out", default=os.environ.get(ENV_PREFIX + "OUT", "out"))
    parser.add_argument("--seed", default=os.environ.get(ENV_PREFIX + "SEED", "0"))
    parser.add_argument("--list-checks", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.list_checks:
        print(format_checks())
        return 0
    if args.subcommand is None:
        print(_dump({"status": "config-error", "errors": [{"loc": ["subcommand"], "msg": "missing subcommand"}]}))
        return 2
    try:
        seed = int(args.seed)
        if not 0 <= seed < 2**64:
            raise ValueError
    except ValueError:
        print(_dump({"status": "config-error", "errors": [{"loc": ["--seed"], "msg": f"not a u64: {args.seed}"}]}))
        return 2
    out = Path(args.out)
    try:
        cfg = load_config(args.subcommand, args.config)
        out.mkdir(parents=True, exist_ok=True)
        checks = RUNNERS[args.subcommand](cfg, np.random.default_rng(seed), out)
    except ConfigError as exc:
        report = {"status": "config-error", "subcommand": args.subcommand, "errors": exc.details}
        print(_dump(report))
        return 2
    passed = all(c["pass"] for c in checks)
    report = {
        "subcommand": args.subcommand,
        "seed": seed,
        "config": cfg.model_dump(),
        "checks": checks,
        "pass": passed,
        "status": "pass" if passed else "fail",
    }
    text = _dump(report)
    (out / "report.json").write_text(text)
    print(text, end="")
    return 0 if passed else 1


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
