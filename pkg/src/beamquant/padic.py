"""p-adic Schrodinger and Euler-Bernoulli evolution on a finite window of Q_p.

The window is the finite group ``G = p^{-M} Z_p / p^N Z_p`` with ``P = p^(M+N)``
elements.  Element ``a`` in ``[0, P)`` stands for ``x = p^{-M} a``, i.e. the
digit vector ``(a_{-M}, ..., a_{N-1})`` of ``x = sum a_j p^j``.  The dual group
``p^{-N} Z_p / p^M Z_p`` is indexed the same way with ``k = p^{-N} b``.

The additive character is ``chi(k x) = exp(2 pi i {k x}_p)``; with the
indexing above ``{k x}_p = (a b mod P) / P``, so the unitary transform
``f~(b) = P^{-1/2} sum_a f(a) chi(k_b x_a)`` is a length-``P`` DFT with a
positive exponent.  The Vladimirov operator ``D^alpha`` is the multiplier
``|k|_p^alpha`` on the dual; ``|0|_p = 0`` so the zero mode never moves.
"""

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .spectral import RealFieldPair


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


def valuation(n: int, p: int) -> int:
    """Exponent of ``p`` in the nonzero integer ``n``."""
    if n == 0:
        raise ValueError("valuation of 0 is +infinity")
    n, v = abs(n), 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation(x, p: int) -> float:
    """``v_p(x)`` of a rational; ``inf`` for zero."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    return valuation(x.numerator, p) - valuation(x.denominator, p)


def padic_norm(x, p: int) -> float:
    """``|x|_p = p^{-v_p(x)}`` for rationals, ``|0|_p = 0``."""
    v = padic_valuation(x, p)
    return 0.0 if v == math.inf else float(Fraction(p) ** -v)


@dataclass(frozen=True)
class PAdicGrid:
    p: int
    M: int
    N: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.M < 0 or self.N < 0 or self.M + self.N < 1:
            raise ValueError("need M, N >= 0 with M + N >= 1")

    @property
    def size(self) -> int:
        return self.p ** (self.M + self.N)

    @property
    def shape(self) -> tuple:
        return (self.size,)

    @property
    def cell_measure(self) -> float:
        """Haar measure of one element's ball ``x + p^N Z_p``."""
        return float(self.p) ** -self.N

    def digits(self, a: int) -> tuple:
        """Digit vector ``(a_{-M}, ..., a_{N-1})`` of element index ``a``."""
        out = []
        for _ in range(self.M + self.N):
            a, d = divmod(a, self.p)
            out.append(d)
        return tuple(out)

    def from_digits(self, digits) -> int:
        if len(digits) != self.M + self.N:
            raise ValueError(f"expected {self.M + self.N} digits")
        if any(not 0 <= d < self.p for d in digits):
            raise ValueError("digits must lie in [0, p)")
        return sum(d * self.p**i for i, d in enumerate(digits))

    def element(self, a: int) -> Fraction:
        return Fraction(a, self.p**self.M)

    def index_of(self, x) -> int:
        """Element index of a rational ``x`` whose denominator divides ``p^M`` (reduced mod ``p^N``)."""
        scaled = Fraction(x) * self.p**self.M
        if scaled.denominator != 1:
            raise ValueError(f"{x} is not in p^-M Z_p")
        return scaled.numerator % self.size

    def _index_valuations(self) -> np.ndarray:
        P = self.size
        v = np.full(P, self.M + self.N, dtype=np.int64)  # index 0 treated separately
        a = np.arange(1, P)
        vals = np.zeros(P - 1, dtype=np.int64)
        rest = a.copy()
        for _ in range(self.M + self.N):
            divisible = rest % self.p == 0
            vals += divisible
            rest = np.where(divisible, rest // self.p, rest)
        v[1:] = vals
        return v

    @cached_property
    def valuations(self) -> np.ndarray:
        """``v_p(x_a)``; entry 0 (the zero class) is set to ``N``, one past the last resolved digit."""
        return self._index_valuations() - self.M

    @cached_property
    def norms(self) -> np.ndarray:
        n = float(self.p) ** (-self.valuations.astype(float))
        n[0] = 0.0
        return n

    @cached_property
    def dual_norms(self) -> np.ndarray:
        """``|k_b|_p`` for ``k_b = p^{-N} b``; 0 at ``b = 0``."""
        v = self._index_valuations() - self.N
        n = float(self.p) ** (-v.astype(float))
        n[0] = 0.0
        return n

    def unit_ball(self) -> np.ndarray:
        """Indicator of ``Z_p`` in the window: the first ``M`` digits vanish."""
        return (np.arange(self.size) % self.p**self.M == 0).astype(float)

    def dual_unit_ball(self) -> np.ndarray:
        return (np.arange(self.size) % self.p**self.N == 0).astype(float)

    def negate(self) -> np.ndarray:
        """Index permutation ``a -> -a mod P``."""
        return (-np.arange(self.size)) % self.size


@dataclass(frozen=True)
class PAdicField:
    grid: PAdicGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.shape != self.grid.shape:
            raise ValueError("field length must equal p^(M+N)")
        if not np.all(np.isfinite(vals)):
            raise ValueError("p-adic field values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class PAdicSpectral:
    grid: PAdicGrid
    coeffs: np.ndarray = field(repr=False)


def padic_fourier(f: PAdicField) -> PAdicSpectral:
    return PAdicSpectral(f.grid, np.fft.ifft(f.values, norm="ortho"))


def padic_fourier_inverse(s: PAdicSpectral) -> PAdicField:
    return PAdicField(s.grid, np.fft.fft(s.coeffs, norm="ortho"))


def _multiply(f: PAdicField, multiplier: np.ndarray) -> PAdicField:
    return PAdicField(f.grid, np.fft.fft(np.fft.ifft(f.values, norm="ortho") * multiplier, norm="ortho"))


def vladimirov_apply(f: PAdicField, alpha: float) -> PAdicField:
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return _multiply(f, f.grid.dual_norms**alpha)


def evolve_padic_schrodinger(psi0: PAdicField, alpha: float, t: float) -> PAdicField:
    """``i psi_t = D^alpha psi``: each dual mode picks up ``exp(-i |k|_p^alpha t)``."""
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    return _multiply(psi0, np.exp(-1j * psi0.grid.dual_norms**alpha * t))


def evolve_padic_eb(u0, v0, alpha: float, t: float, grid: PAdicGrid | None = None) -> RealFieldPair:
    """Rotate ``(u~, v~)`` by ``|k|_p^alpha t`` per dual mode.

    Equivalent to the two beams ``w_tt + D^{2 alpha} w = 0`` with coupled data
    ``u_t(0) = D^alpha v0`` and ``v_t(0) = -D^alpha u0``.
    """
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    if grid is None:
        grid = u0.grid
    u0 = np.asarray(getattr(u0, "values", u0))
    v0 = np.asarray(getattr(v0, "values", v0))
    for name, arr in (("u0", u0), ("v0", v0)):
        if np.iscomplexobj(arr) and np.any(arr.imag != 0):
            raise ValueError(f"{name} must be real")
    omega = grid.dual_norms**alpha * t
    uh, vh = np.fft.ifft(u0.real, norm="ortho"), np.fft.ifft(v0.real, norm="ortho")
    c, s = np.cos(omega), np.sin(omega)
    u = np.fft.fft(uh * c + vh * s, norm="ortho").real
    v = np.fft.fft(vh * c - uh * s, norm="ortho").real
    return RealFieldPair(grid, u, v)


def padic_energy(u, v, alpha: float, grid: PAdicGrid | None = None) -> float:
    """``1/2 sum_k |k|_p^alpha (|u~|^2 + |v~|^2)``."""
    if grid is None:
        grid = u.grid
    uh = np.fft.ifft(np.asarray(getattr(u, "values", u)), norm="ortho")
    vh = np.fft.ifft(np.asarray(getattr(v, "values", v)), norm="ortho")
    terms = grid.dual_norms**alpha * (np.abs(uh) ** 2 + np.abs(vh) ** 2)
    return 0.5 * math.fsum(terms)


def embed(f: PAdicField, M: int, N: int) -> PAdicField:
    """Extend a field to the larger window ``(M, N)`` as a locally constant function.

    Values outside the old window ``p^{-M_old} Z_p`` are zero; each old ball of
    radius ``p^{-N_old}`` is split into ``p^{N - N_old}`` equal-valued balls.
    """
    g = f.grid
    if M < g.M or N < g.N:
        raise ValueError("the new window must contain the old one")
    big = PAdicGrid(g.p, M, N)
    a = np.arange(big.size)
    x_num = a  # x = a / p^M
    # x lies in p^{-M_old} Z_p iff p^{M - M_old} divides a
    inside = x_num % g.p ** (M - g.M) == 0
    old_index = (x_num // g.p ** (M - g.M)) % g.size
    values = np.where(inside, f.values[old_index], 0)
    return PAdicField(big, values)


def digit_string(grid: PAdicGrid, a: int) -> str:
    """``a_{-M}...a_{-1}|a_0...a_{N-1}`` with digits separated by dots."""
    d = grid.digits(a)
    frac = ".".join(str(x) for x in d[: grid.M])
    whole = ".".join(str(x) for x in d[grid.M:])
    return f"{frac}|{whole}"


def field_csv(f: PAdicField) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["digits", "valuation", "real", "imag"])
    vals = f.grid.valuations
    for a, z in enumerate(f.values):
        val = "inf" if a == 0 else int(vals[a])
        writer.writerow([digit_string(f.grid, a), val, repr(float(z.real)), repr(float(z.imag))])
    return buf.getvalue()


def locally_constant_field(grid: PAdicGrid, rng: np.random.Generator, radius_exp: int = 1,
                           support_exp: int = 1, complex_values: bool = True) -> PAdicField:
    """Random test function: constant on balls ``x + p^{radius_exp} Z_p`` and supported in ``p^{-support_exp} Z_p``.

    Its transform lives on ``|k|_p <= p^{radius_exp}``.
    """
    p = grid.p
    radius_exp = min(radius_exp, grid.N)
    support_exp = min(support_exp, grid.M)
    coarse = PAdicGrid(p, support_exp, radius_exp) if support_exp + radius_exp >= 1 else None
    if coarse is None:
        raise ValueError("window too small for the requested test function")
    vals = rng.standard_normal(coarse.size)
    if complex_values:
        vals = vals + 1j * rng.standard_normal(coarse.size)
    return embed(PAdicField(coarse, vals), grid.M, grid.N)
