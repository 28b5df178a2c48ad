"""
Sections of surjective coarse equivalences
==========================================

A surjection ``phi`` has a section ``psi`` (pick a preimage of every point).
When ``phi`` intertwines ``f`` and ``g`` up to bounded error, so does ``psi``
the other way round, with a bound read off from the control of ``psi``.
"""

from fractions import Fraction

from coarse_dyn.coarse_maps import section_of_surjection
from coarse_dyn.constructions import grid_map, label_collapse, strip_map
from coarse_dyn.metric_core import Strip, Window
from coarse_dyn.verifier import nested_windows

# Collapsing the last ray of a 4-ray strip onto its neighbour
phi = label_collapse(3)
res = section_of_surjection(phi, strip_map("g", 3), strip_map("g", 2), nested_windows(Window.parse("0:32", "1/2")))
print("psi(5, 2) =", res.psi(Strip(Fraction(5), 2)))
print("phi o psi = id:", res.section_exact)
print(f"sup d(psi g, f psi) = {res.report.sup} <= predicted {res.predicted_bound}")
print("  D =", res.D, " B_back =", res.B_back, " rho_psi(D) =", res.rho_psi_D)

# On the thick halflines the least preimage under Phi is the inclusion itself
res = section_of_surjection(grid_map("PhiInv"), grid_map("f"), grid_map("g"),
                            nested_windows(Window.parse("0:8", "1/2", "1:8")), predict=False)
print("grid section intertwines exactly:", res.intertwining_exact)
