"""Registry of the acceptance checks and their pinned tolerances."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Check:
    id: int
    name: str
    statement: str
    tolerance: str


ACCEPTANCE = (
    Check(1, "equivalence",
          "10 seeded resolved psi0 on n=256 (1D, L=2pi) and 64x64 (2D), t in {0.1, 1, 10}: "
          "||psi_S - (u_EB + i v_EB)||_inf <= tol * ||psi0||_inf; runtime < 10 s",
          "1e-11"),
    Check(2, "coupled-modes",
          "central differences (step 1e-6) of the closed forms match k^2 v~ / -k^2 u~ and the "
          "|k|_p^alpha analogues over all modes",
          "1e-4 absolute"),
    Check(3, "conservation",
          "H_sym constant under exact rotation over t in [0, 10]; leapfrog at stable dt over 1e4 steps "
          "oscillates within 1e-4 relative with |slope| <= HAC standard error",
          "1e-12 relative (exact); 1e-4 relative (leapfrog)"),
    Check(4, "generalized-propagator",
          "random smooth V, n=128: u+iv from cos/sin(Ht) satisfies i psi_t = H psi (central difference "
          "step 1e-5); V=0 reduces to the free solver; expanded fourth-order identity residual",
          "1e-4; 1e-10; 1e-10"),
    Check(5, "curved-flat-reduction",
          "flat metric: lowest 5 eigenvalues of -Lap_g vs the spectral free operator; error drops 4x "
          "when n doubles",
          "ratio 4 +/- 20%"),
    Check(6, "eigenfrequency-correspondence",
          "simply-supported beam vs Dirichlet box, L=pi, n=512, modes 1..5: |omega_n - n^2| / n^2",
          "1e-2"),
    Check(7, "two-slit",
          "Schrodinger and plate paths agree; >= 3 fringes with visibility >= 0.5; spacing within 30% "
          "of the Fraunhofer estimate; y-symmetry; runtime < 60 s at 256x256",
          "1e-10 sup; 0.5; 30%; 1e-10"),
    Check(8, "p-adic",
          "p in {2,3,5}, alpha in {0.5,1,2}, (M,N)=(3,3): Schrodinger/EB equivalence, l2 norm and H_sym "
          "conservation, unit-ball self-duality against the character-sum oracle",
          "1e-12"),
    Check(9, "convergence-orders",
          "leapfrog self-convergence order; finite-difference eigenvalue convergence order",
          "2.0 +/- 0.1; 2.0 +/- 0.2"),
)


def format_checks() -> str:
    lines = []
    for c in ACCEPTANCE:
        lines.append(f"[{c.id}] {c.name}  (tolerance: {c.tolerance})")
        lines.append(f"    {c.statement}")
    return "\n".join(lines)
