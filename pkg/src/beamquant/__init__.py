"""Spectral solvers relating the free Schrodinger equation to coupled Euler-Bernoulli beams."""

from .spectral import ComplexField, Grid, RealFieldPair
from .schrodinger import SchrodingerProblem, evolve_free
from .euler_bernoulli import EBProblem, evolve_eb, verify_equivalence

__all__ = [
    "ComplexField",
    "EBProblem",
    "Grid",
    "RealFieldPair",
    "SchrodingerProblem",
    "evolve_eb",
    "evolve_free",
    "verify_equivalence",
]
__version__ = "0.1.0"
