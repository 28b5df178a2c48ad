"""
Thick halflines in R^3
======================

``X`` is the union of ``{n^2} x [0, oo) x {1..2n+1}`` and ``Y`` the same with
labels ``1..2n``.  ``f(n^2, r, k) = (n^2, kr, k)`` and ``g`` is its restriction
to ``Y``.  The shift ``phi`` and the inclusion ``psi`` both intertwine exactly
and both are coarse equivalences.  Yet any conjugacy would have to move the
halflines up and keep them in place at the same time.
"""

from fractions import Fraction

from coarse_dyn.constructions import grid_map
from coarse_dyn.metric_core import Grid3, Window
from coarse_dyn.verifier import (
    grid_hypothesis_check,
    halfline_decomposition,
    monotonicity_contradiction,
)

phi, Psi = grid_map("phi"), grid_map("PsiInv")
x = Grid3(4, Fraction(5, 2), 3)
print("f(x) =", grid_map("f")(x), " phi(x) =", phi(x), " Psi(phi(x)) =", Psi(phi(x)))

rep = grid_hypothesis_check(Window.parse("0:8", "1/2", "1:12"))
for c in rep.claims:
    extra = f" B={c.value}" if c.value is not None else ""
    print(f"  {c.verdict} {c.id}{extra}")

# Which halfline does each halfline go to?
shift = halfline_decomposition(phi, Psi, (2, 10))
incl = halfline_decomposition(grid_map("psi"), grid_map("PhiInv"), (2, 10))
print("phi:", shift.F)
print("psi:", incl.F)

verdict = monotonicity_contradiction(shift.F, incl.F)
print(verdict.verdict, verdict.certificate)
